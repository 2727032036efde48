#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "nsklab/constitutive.hpp"
#include "nsklab/grid.hpp"

namespace nsklab {

// Finite sum of power laws with exact exponents; like exponents are merged.
struct PowerLawSum {
  std::map<Exponent, double> terms;

  void add(double coefficient, Exponent e) {
    if (coefficient == 0.0) return;
    terms[e] += coefficient;
    if (terms[e] == 0.0) terms.erase(e);
  }
  double operator()(double rho) const {
    double s = 0.0;
    for (const auto& [e, c] : terms) s += PowerLaw(c, e)(rho);
    return s;
  }
  double d1(double rho) const {
    double s = 0.0;
    for (const auto& [e, c] : terms) s += PowerLaw(c, e).d1(rho);
    return s;
  }
  std::size_t size() const { return terms.size(); }
};

// kappa_eps - omega (1 - omega) mu_eps^2 / rho^3
inline PowerLawSum effective_capillarity(const ConstitutiveSet& c, double omega) {
  if (!c.power_class()) throw DomainError("effective capillarity needs power laws");
  PowerLawSum s;
  if (c.capillarity.is_power()) {
    const auto& k = c.capillarity.power();
    s.add(c.delta() * k.coefficient, k.exponent);
  }
  const double w = omega * (1.0 - omega);
  if (w != 0.0) {
    const auto& m = c.viscosity.power();
    s.add(-w * c.eps * c.eps * m.coefficient * m.coefficient,
          Exponent(2) * m.exponent - Exponent(3));
  }
  return s;
}

inline double effective_capillarity_value(const ConstitutiveSet& c, double omega, double rho) {
  const double w = omega * (1.0 - omega);
  const double k = c.kappa_eps(rho);
  if (w == 0.0) return k;
  const double m = c.mu_eps(rho);
  return k - w * m * m / (rho * rho * rho);
}

inline double zeta_power_law(double alpha, double beta, double rho) {
  return -(beta * (beta - 1.0) + 2.0 * (alpha - 1.0) * (alpha - 2.0)) / (6.0 * rho * rho);
}

// zeta = -(1/3) [ kappa''/(2 kappa) + (mu/rho)'' rho / mu ]
inline double evaluate_zeta(const ConstitutiveSet& c, double rho) {
  if (c.capillarity.is_zero()) throw DomainError("zeta undefined for zero capillarity");
  if (!(rho > 0.0)) throw DomainError("zeta needs rho > 0");
  const double k = c.kappa(rho), k2 = c.capillarity.d2(rho);
  const double m = c.mu(rho), m1 = c.viscosity.d1(rho), m2 = c.viscosity.d2(rho);
  const double mu_over_rho_2 = m2 / rho - 2.0 * m1 / (rho * rho) + 2.0 * m / (rho * rho * rho);
  return -(0.5 * k2 / k + mu_over_rho_2 * rho / m) / 3.0;
}

struct DiagnosticOptions {
  double rho_floor = 0.0;
  bool renormalize = true;
};

namespace detail {

inline double clamp_rho(double rho, double floor) { return std::max(rho, floor); }

inline double renormalization(const ConstitutiveSet& c, double rho_star, double rho) {
  if (rho_star <= 0.0) return 0.0;
  const double e = internal_energy(c, rho_star);
  return rho_star * e + (e + rho_star * internal_energy_d1(c, rho_star)) * (rho - rho_star);
}

inline double checked_kappa_eps(const ConstitutiveSet& c, double rho) {
  if (rho == 0.0 && c.capillarity.singular_at_zero())
    throw DomainError("capillarity with negative exponent at exact vacuum");
  return c.kappa_eps(rho);
}

}  // namespace detail

// E = rho u^2/2 + rho e(rho) + kappa_eps rho_x^2 / 2, optionally renormalized about rho*.
inline std::vector<double> local_energy(const ConstitutiveSet& c, const FieldState& s,
                                        const Grid1D& g, const DiagnosticOptions& opt = {}) {
  const auto rp = padded_rho(g, s.rho);
  const auto d = central_derivatives(g, rp);
  const double rho_star = g.is_torus() || !opt.renormalize ? 0.0 : g.rho_star();
  std::vector<double> e(g.n());
  for (int i = 0; i < g.n(); ++i) {
    const double r = detail::clamp_rho(s.rho[i], opt.rho_floor);
    e[i] = 0.5 * r * s.u[i] * s.u[i] + r * internal_energy(c, r) +
           0.5 * detail::checked_kappa_eps(c, r) * d.d1[i] * d.d1[i] -
           detail::renormalization(c, rho_star, r);
  }
  return e;
}

// u + omega mu_eps(rho) rho_x / rho^2
inline std::vector<double> effective_velocity(const ConstitutiveSet& c, const FieldState& s,
                                              const Grid1D& g, double omega = 1.0,
                                              const DiagnosticOptions& opt = {}) {
  const auto rp = padded_rho(g, s.rho);
  const auto d = central_derivatives(g, rp);
  std::vector<double> w(g.n());
  for (int i = 0; i < g.n(); ++i) {
    const double r = detail::clamp_rho(s.rho[i], opt.rho_floor);
    double coef;
    if (r > 0.0) {
      coef = c.mu_eps(r) / (r * r);
    } else if (omega == 0.0 || c.eps == 0.0 || c.viscosity.is_zero()) {
      coef = 0.0;
    } else if (c.viscosity.is_power() && c.viscosity.power().exponent >= Exponent(2)) {
      const auto& m = c.viscosity.power();
      coef = m.exponent == Exponent(2) ? c.eps * m.coefficient : 0.0;
    } else {
      throw DomainError("effective velocity diverges on vacuum cell " + std::to_string(i));
    }
    w[i] = s.u[i] + omega * coef * d.d1[i];
  }
  return w;
}

inline std::vector<double> local_effective_energy(const ConstitutiveSet& c, const FieldState& s,
                                                  const Grid1D& g, double omega = 1.0,
                                                  const DiagnosticOptions& opt = {}) {
  const auto rp = padded_rho(g, s.rho);
  const auto d = central_derivatives(g, rp);
  const auto ut = effective_velocity(c, s, g, omega, opt);
  const double rho_star = g.is_torus() || !opt.renormalize ? 0.0 : g.rho_star();
  std::vector<double> e(g.n());
  for (int i = 0; i < g.n(); ++i) {
    const double r = detail::clamp_rho(s.rho[i], opt.rho_floor);
    detail::checked_kappa_eps(c, r);
    const double kt = effective_capillarity_value(c, omega, r);
    e[i] = 0.5 * r * ut[i] * ut[i] + r * internal_energy(c, r) + 0.5 * kt * d.d1[i] * d.d1[i] -
           detail::renormalization(c, rho_star, r);
  }
  return e;
}

// Pointwise integrands of the dissipation ledger.
struct DissipationTerms {
  std::vector<double> visc;   // mu_eps u_x^2 (= D)
  std::vector<double> press;  // mu_eps p' / rho^2 rho_x^2
  std::vector<double> rhoxx;  // mu_eps kappa_eps / rho rho_xx^2
  std::vector<double> rhox4;  // mu_eps kappa_eps / rho^3 rho_x^4
  std::vector<double> d_eff;  // effective dissipation (signed)
  int vacuum_cells = 0;
};

inline DissipationTerms dissipation_terms(const ConstitutiveSet& c, const FieldState& s,
                                          const Grid1D& g, double omega = 1.0,
                                          const DiagnosticOptions& opt = {}) {
  const int n = g.n();
  const auto rp = padded_rho(g, s.rho);
  const auto dr = central_derivatives(g, rp);
  const auto du = central_derivatives(g, padded_u(g, s.u));
  DissipationTerms t{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                     std::vector<double>(n), std::vector<double>(n), 0};
  std::vector<double> dut;
  if (omega != 1.0) {
    const auto ut = effective_velocity(c, s, g, omega, opt);
    // ghost effective velocity equals the far-field velocity (rho_x = 0 there)
    dut = central_derivatives(g, padded_u(g, ut)).d1;
  }
  const bool has_k = !c.capillarity.is_zero() && c.delta() != 0.0;
  for (int i = 0; i < n; ++i) {
    if (s.rho[i] <= opt.rho_floor) ++t.vacuum_cells;
    const double r = detail::clamp_rho(s.rho[i], opt.rho_floor);
    if (!(r > 0.0)) throw DomainError("dissipation evaluated at exact vacuum, cell " + std::to_string(i));
    const double m = c.mu_eps(r);
    const double rx = dr.d1[i], rxx = dr.d2[i];
    t.visc[i] = m * du.d1[i] * du.d1[i];
    t.press[i] = m * c.dp(r) / (r * r) * rx * rx;
    double zeta = 0.0;
    if (has_k) {
      const double mk = m * c.kappa_eps(r) / r;
      t.rhoxx[i] = mk * rxx * rxx;
      t.rhox4[i] = mk / (r * r) * rx * rx * rx * rx;
      zeta = evaluate_zeta(c, r);
    }
    double deff = omega * t.press[i] + omega * (t.rhoxx[i] + zeta * r * r * t.rhox4[i]);
    if (omega != 1.0) deff += (1.0 - omega) * m * dut[i] * dut[i];
    t.d_eff[i] = deff;
  }
  return t;
}

struct LocalDissipations {
  std::vector<double> D;
  std::vector<double> D_eff;
};

inline LocalDissipations local_dissipations(const ConstitutiveSet& c, const FieldState& s,
                                            const Grid1D& g, double omega = 1.0,
                                            const DiagnosticOptions& opt = {}) {
  auto t = dissipation_terms(c, s, g, omega, opt);
  return {std::move(t.visc), std::move(t.d_eff)};
}

struct SnapshotEnergies {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double effective_energy = 0.0;
};

inline SnapshotEnergies snapshot_energies(const ConstitutiveSet& c, const FieldState& s,
                                          const Grid1D& g, double omega = 1.0,
                                          const DiagnosticOptions& opt = {}) {
  return {s.t, integrate(g, s.rho), integrate(g, local_energy(c, s, g, opt)),
          integrate(g, local_effective_energy(c, s, g, omega, opt))};
}

struct LedgerRow {
  double t = 0.0;
  double mass = 0.0;
  double E = 0.0;
  double E_eff = 0.0;
  double acc_visc = 0.0;
  double acc_press = 0.0;
  double acc_rhoxx = 0.0;
  double acc_rhox4 = 0.0;
  double acc_Deff_signed = 0.0;
  int vacuum_cells = 0;
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;
  double edscr_lhs = 0.0;
  double initial_energy = 0.0;  // E*(0) + E_eff*(0)
  double edscr_ratio = 0.0;
};

// Snapshot energies plus trapezoidal time integrals of the dissipation terms.
inline EnergyLedger edscr_ledger(const ConstitutiveSet& c, std::span<const FieldState> traj,
                                 const Grid1D& g, double omega = 1.0,
                                 const DiagnosticOptions& opt = {}) {
  EnergyLedger L;
  if (traj.empty()) return L;
  std::array<double, 5> prev{}, acc{};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj[k];
    const auto e = snapshot_energies(c, s, g, omega, opt);
    const auto d = dissipation_terms(c, s, g, omega, opt);
    const std::array<double, 5> cur{integrate(g, d.visc), integrate(g, d.press),
                                    integrate(g, d.rhoxx), integrate(g, d.rhox4),
                                    integrate(g, d.d_eff)};
    if (k > 0) {
      const double dt = s.t - traj[k - 1].t;
      for (int j = 0; j < 5; ++j) acc[j] += 0.5 * dt * (prev[j] + cur[j]);
    }
    prev = cur;
    L.rows.push_back({s.t, e.mass, e.energy, e.effective_energy, acc[0], acc[1], acc[2], acc[3],
                      acc[4], d.vacuum_cells});
  }
  double sup = -INFINITY;
  for (const auto& r : L.rows) sup = std::max(sup, r.E + r.E_eff);
  const auto& last = L.rows.back();
  L.edscr_lhs = sup + last.acc_visc + last.acc_press + last.acc_rhoxx + last.acc_rhox4;
  L.initial_energy = L.rows.front().E + L.rows.front().E_eff;
  L.edscr_ratio = L.initial_energy != 0.0 ? L.edscr_lhs / L.initial_energy : INFINITY;
  return L;
}

struct BalanceResidual {
  double r_phys = 0.0;
  double r_eff = 0.0;
};

// Max over snapshot intervals of |E(t_{k+1}) - E(t_k) + int int D| / E(0), and likewise for the
// effective energy.
inline BalanceResidual energy_balance_residual(const ConstitutiveSet& c,
                                               std::span<const FieldState> traj, const Grid1D& g,
                                               double omega = 1.0,
                                               const DiagnosticOptions& opt = {}) {
  if (!g.is_torus()) throw ConfigError("energy balance residual needs a torus trajectory");
  BalanceResidual r;
  if (traj.size() < 2) return r;
  std::vector<SnapshotEnergies> e;
  std::vector<double> d, de;
  for (const auto& s : traj) {
    e.push_back(snapshot_energies(c, s, g, omega, opt));
    const auto t = dissipation_terms(c, s, g, omega, opt);
    d.push_back(integrate(g, t.visc));
    de.push_back(integrate(g, t.d_eff));
  }
  const double e0 = std::fabs(e[0].energy) > 0.0 ? std::fabs(e[0].energy) : 1.0;
  const double f0 = std::fabs(e[0].effective_energy) > 0.0 ? std::fabs(e[0].effective_energy) : 1.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const double dt = traj[k + 1].t - traj[k].t;
    r.r_phys = std::max(r.r_phys, std::fabs(e[k + 1].energy - e[k].energy +
                                            0.5 * dt * (d[k] + d[k + 1])) / e0);
    r.r_eff = std::max(r.r_eff, std::fabs(e[k + 1].effective_energy - e[k].effective_energy +
                                          0.5 * dt * (de[k] + de[k + 1])) / f0);
  }
  return r;
}

}  // namespace nsklab
