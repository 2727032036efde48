#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nsklab/constitutive.hpp"
#include "nsklab/errors.hpp"
#include "nsklab/grid.hpp"

namespace nsklab {

enum class HyperbolicScheme { rusanov, muscl, central };

inline HyperbolicScheme parse_scheme(const std::string& s) {
  if (s == "rusanov") return HyperbolicScheme::rusanov;
  if (s == "muscl") return HyperbolicScheme::muscl;
  if (s == "central") return HyperbolicScheme::central;
  throw ConfigError("unknown hyperbolic scheme '" + s + "'");
}

inline const char* to_string(HyperbolicScheme s) {
  switch (s) {
    case HyperbolicScheme::rusanov: return "rusanov";
    case HyperbolicScheme::muscl: return "muscl";
    default: return "central";
  }
}

struct SolverConfig {
  double cfl_hyp = 0.5;
  double cfl_visc = 0.4;
  double cfl_disp = 0.25;
  double rho_floor = 0.0;
  bool lifting = false;  // floor = 1/n_cells
  double t_end = 0.1;
  double snapshot_dt = 0.01;
  HyperbolicScheme scheme = HyperbolicScheme::rusanov;
  long max_steps = 100'000'000;

  void validate() const {
    if (!(cfl_hyp > 0.0 && cfl_hyp <= 1.0)) throw ConfigError("cfl_hyp must lie in (0, 1]");
    if (!(cfl_visc > 0.0) || !(cfl_disp > 0.0)) throw ConfigError("cfl factors must be positive");
    if (rho_floor < 0.0) throw ConfigError("rho_floor must be >= 0");
    if (!(t_end > 0.0) || !(snapshot_dt > 0.0)) throw ConfigError("t_end and snapshot_dt must be positive");
  }
  double floor(const Grid1D& g) const { return lifting ? std::max(rho_floor, 1.0 / g.n()) : rho_floor; }
};

struct Trajectory {
  std::vector<FieldState> snapshots;
  std::vector<double> dt_history;
  long steps = 0;
  bool stable = true;
  double wall_seconds = 0.0;
};

struct BlowupError : Error {
  BlowupError(const std::string& what, FieldState last, double t)
      : Error(what), last_good(std::move(last)), t(t) {}
  FieldState last_good;
  double t;
};

struct Conserved {
  std::vector<double> rho;
  std::vector<double> m;
};

namespace detail {

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::fabs(a) < std::fabs(b) ? a : b;
}

// Evaluates the NSK right-hand side in flux form; owns its scratch buffers.
class NskOperator {
 public:
  NskOperator(const ConstitutiveSet& c, const Grid1D& g, HyperbolicScheme scheme)
      : c_(c), g_(g), scheme_(scheme), pressure_(c.pressure), p_(pressure_, 1.0), mu_(c.viscosity, c.eps),
        kappa_(c.capillarity, c.delta()) {
    const int n = g.n() + 2 * kG;
    rho_.resize(n);
    m_.resize(n);
    u_.resize(n);
    G_.resize(n);
    frho_.resize(g.n() + 1);
    fm_.resize(g.n() + 1);
  }

  void operator()(const Conserved& U, Conserved& dU) {
    const int n = g_.n();
    const double dx = g_.dx();
    fill_ghosts(U);
    double rmax = 0.0;
    for (int j = 0; j < n + 2 * kG; ++j) rmax = std::max(rmax, rho_[j]);
    const double tiny = 1e-14 * rmax;
    const bool kappa_singular = !kappa_.zero() && c_.capillarity.singular_at_zero();
    const bool mu_singular = !mu_.zero() && c_.viscosity.singular_at_zero();
    for (int j = 0; j < n + 2 * kG; ++j) {
      if (rho_[j] < 0.0 || (rho_[j] == 0.0 && (kappa_singular || mu_singular)))
        throw VacuumError(rho_[j] < 0.0 ? "negative density" : "singular law at vacuum",
                          std::clamp(j - kG, 0, n - 1));
      u_[j] = rho_[j] > tiny ? m_[j] / std::max(rho_[j], 1e-30) : 0.0;
    }
    if (!kappa_.zero()) {
      for (int j = 1; j < n + 2 * kG - 1; ++j)
        G_[j] = rho_[j] * kappa_(rho_[j]) * (rho_[j + 1] - rho_[j - 1]) / (2.0 * dx);
    }
    for (int f = 0; f <= n; ++f) {
      const int i = f + kG - 1;  // face between i and i+1
      double rl = rho_[i], ml = m_[i], rr = rho_[i + 1], mr = m_[i + 1];
      if (scheme_ == HyperbolicScheme::muscl) {
        rl += 0.5 * minmod(rho_[i] - rho_[i - 1], rho_[i + 1] - rho_[i]);
        ml += 0.5 * minmod(m_[i] - m_[i - 1], m_[i + 1] - m_[i]);
        rr -= 0.5 * minmod(rho_[i + 1] - rho_[i], rho_[i + 2] - rho_[i + 1]);
        mr -= 0.5 * minmod(m_[i + 1] - m_[i], m_[i + 2] - m_[i + 1]);
      }
      const double ul = rl > tiny ? ml / std::max(rl, 1e-30) : 0.0;
      const double ur = rr > tiny ? mr / std::max(rr, 1e-30) : 0.0;
      const double pl = p_(rl), pr = p_(rr);
      double fr = 0.5 * (ml + mr);
      double fmv = 0.5 * (ml * ul + pl + mr * ur + pr);
      if (scheme_ != HyperbolicScheme::central) {
        const double a = std::max(std::fabs(ul) + std::sqrt(std::max(p_.d1(rl), 0.0)),
                                  std::fabs(ur) + std::sqrt(std::max(p_.d1(rr), 0.0)));
        fr -= 0.5 * a * (rr - rl);
        fmv -= 0.5 * a * (mr - ml);
      }
      const double rbar = 0.5 * (rho_[i] + rho_[i + 1]);
      if (!mu_.zero()) fmv -= mu_(rbar) * (u_[i + 1] - u_[i]) / dx;
      if (!kappa_.zero()) {
        const double rx = (rho_[i + 1] - rho_[i]) / dx;
        const double C = rbar * kappa_.d1(rbar) + 3.0 * kappa_(rbar);
        fmv -= (G_[i + 1] - G_[i]) / dx - 0.5 * C * rx * rx;
      }
      frho_[f] = fr;
      fm_[f] = fmv;
    }
    dU.rho.resize(n);
    dU.m.resize(n);
    for (int i = 0; i < n; ++i) {
      dU.rho[i] = -(frho_[i + 1] - frho_[i]) / dx;
      dU.m[i] = -(fm_[i + 1] - fm_[i]) / dx;
    }
  }

 private:
  static constexpr int kG = 2;

  void fill_ghosts(const Conserved& U) {
    const int n = g_.n();
    for (int i = 0; i < n; ++i) {
      rho_[i + kG] = U.rho[i];
      m_[i + kG] = U.m[i];
    }
    if (g_.is_torus()) {
      for (int k = 0; k < kG; ++k) {
        rho_[k] = U.rho[n - kG + k];
        m_[k] = U.m[n - kG + k];
        rho_[n + kG + k] = U.rho[k];
        m_[n + kG + k] = U.m[k];
      }
    } else {
      const FarField l = g_.left_state(), r = g_.right_state();
      for (int k = 0; k < kG; ++k) {
        rho_[k] = l.rho;
        m_[k] = l.rho * l.u;
        rho_[n + kG + k] = r.rho;
        m_[n + kG + k] = r.rho * r.u;
      }
    }
  }

  const ConstitutiveSet& c_;
  const Grid1D& g_;
  HyperbolicScheme scheme_;
  Law pressure_;
  LawEval p_, mu_, kappa_;
  std::vector<double> rho_, m_, u_, G_, frho_, fm_;
};

inline Conserved to_conserved(const FieldState& s) { return {s.rho, s.momentum()}; }

inline FieldState to_primitive(const Conserved& U, double t) {
  FieldState s{U.rho, std::vector<double>(U.rho.size()), t};
  double rmax = 0.0;
  for (double r : U.rho) rmax = std::max(rmax, r);
  for (std::size_t i = 0; i < U.rho.size(); ++i)
    s.u[i] = U.rho[i] > 1e-14 * rmax ? U.m[i] / std::max(U.rho[i], 1e-30) : 0.0;
  return s;
}

}  // namespace detail

struct Rhs {
  std::vector<double> drho_dt;
  std::vector<double> dm_dt;
};

inline Rhs rhs(const ConstitutiveSet& c, const FieldState& s, const Grid1D& g,
               HyperbolicScheme scheme = HyperbolicScheme::rusanov) {
  s.validate(g);
  detail::NskOperator op(c, g, scheme);
  Conserved d;
  op(detail::to_conserved(s), d);
  return {std::move(d.rho), std::move(d.m)};
}

struct DtBreakdown {
  double hyperbolic = INFINITY;
  double viscous = INFINITY;
  double dispersive = INFINITY;
  double dt() const { return std::min({hyperbolic, viscous, dispersive}); }
};

inline DtBreakdown stable_dt_breakdown(const ConstitutiveSet& c, const FieldState& s,
                                       const Grid1D& g, const SolverConfig& cfg) {
  const double dx = g.dx();
  const LawEval mu(c.viscosity, c.eps), kappa(c.capillarity, c.delta());
  double smax = 0.0, nu = 0.0, disp = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double r = s.rho[i];
    smax = std::max(smax, std::fabs(s.u[i]) + std::sqrt(std::max(c.dp(r), 0.0)));
    if (r > 0.0) {
      if (!mu.zero()) nu = std::max(nu, mu(r) / r);
      if (!kappa.zero()) disp = std::max(disp, std::sqrt(std::max(r * kappa(r), 0.0)));
    }
  }
  DtBreakdown b;
  b.hyperbolic = cfg.cfl_hyp * dx / std::max(smax, 1e-30);
  b.viscous = cfg.cfl_visc * dx * dx / std::max(nu, 1e-30);
  b.dispersive = cfg.cfl_disp * dx * dx / std::max(disp, 1e-30);
  return b;
}

inline double stable_dt(const ConstitutiveSet& c, const FieldState& s, const Grid1D& g,
                        const SolverConfig& cfg) {
  return stable_dt_breakdown(c, s, g, cfg).dt();
}

using SnapshotHook = std::function<void(const FieldState&)>;

// SSP-RK3 (Shu-Osher) with per-step stable_dt; snapshots at multiples of snapshot_dt.
inline Trajectory run(const ConstitutiveSet& c, const FieldState& initial, const Grid1D& g,
                      const SolverConfig& cfg, const SnapshotHook& hook = {}) {
  cfg.validate();
  initial.validate(g);
  const auto t0 = std::chrono::steady_clock::now();
  const double floor = cfg.floor(g);
  Trajectory tr;
  detail::NskOperator op(c, g, cfg.scheme);
  Conserved U = detail::to_conserved(initial), U1, U2, dU;
  if (floor > 0.0)
    for (auto& r : U.rho) r = std::max(r, floor);
  const int n = g.n();
  double t = initial.t;
  FieldState last = detail::to_primitive(U, t);
  tr.snapshots.push_back(last);
  if (hook) hook(last);
  const long n_snap = std::lround(std::ceil((cfg.t_end - 1e-12 * cfg.t_end) / cfg.snapshot_dt));
  auto apply_floor = [&](Conserved& V) {
    if (floor > 0.0)
      for (auto& r : V.rho) r = std::max(r, floor);
  };
  auto finite = [](const Conserved& V) {
    for (std::size_t i = 0; i < V.rho.size(); ++i)
      if (!std::isfinite(V.rho[i]) || !std::isfinite(V.m[i])) return false;
    return true;
  };
  for (long k = 1; k <= n_snap; ++k) {
    const double t_snap = std::min(initial.t + k * cfg.snapshot_dt, initial.t + cfg.t_end);
    while (t < t_snap) {
      if (tr.steps >= cfg.max_steps) throw BlowupError("step budget exhausted", last, t);
      const FieldState cur = detail::to_primitive(U, t);
      double dt = stable_dt(c, cur, g, cfg);
      if (t + dt >= t_snap || t_snap - (t + dt) < 1e-12 * dt) dt = t_snap - t;
      op(U, dU);
      U1.rho.resize(n);
      U1.m.resize(n);
      for (int i = 0; i < n; ++i) {
        U1.rho[i] = U.rho[i] + dt * dU.rho[i];
        U1.m[i] = U.m[i] + dt * dU.m[i];
      }
      apply_floor(U1);
      op(U1, dU);
      U2.rho.resize(n);
      U2.m.resize(n);
      for (int i = 0; i < n; ++i) {
        U2.rho[i] = 0.75 * U.rho[i] + 0.25 * (U1.rho[i] + dt * dU.rho[i]);
        U2.m[i] = 0.75 * U.m[i] + 0.25 * (U1.m[i] + dt * dU.m[i]);
      }
      apply_floor(U2);
      op(U2, dU);
      for (int i = 0; i < n; ++i) {
        U.rho[i] = U.rho[i] / 3.0 + 2.0 / 3.0 * (U2.rho[i] + dt * dU.rho[i]);
        U.m[i] = U.m[i] / 3.0 + 2.0 / 3.0 * (U2.m[i] + dt * dU.m[i]);
      }
      apply_floor(U);
      if (!finite(U)) {
        tr.stable = false;
        throw BlowupError("non-finite state detected", last, t);
      }
      t = (t_snap - (t + dt) <= 0.0) ? t_snap : t + dt;
      tr.dt_history.push_back(dt);
      ++tr.steps;
    }
    last = detail::to_primitive(U, t);
    tr.snapshots.push_back(last);
    if (hook) hook(last);
  }
  tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return tr;
}

}  // namespace nsklab
