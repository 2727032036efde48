#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsklab/conditions.hpp"
#include "nsklab/constitutive.hpp"
#include "nsklab/energetics.hpp"
#include "nsklab/entropy.hpp"
#include "nsklab/errors.hpp"
#include "nsklab/grid.hpp"
#include "nsklab/parallel.hpp"
#include "nsklab/riemann.hpp"
#include "nsklab/solver.hpp"

namespace nsklab {

struct Window {
  double x0 = -INFINITY;
  double x1 = INFINITY;
  bool contains(double x) const { return x >= x0 && x <= x1; }
};

struct L1Distance {
  double d_rho = 0.0;
  double d_m = 0.0;
};

inline L1Distance l1_distance(const Grid1D& ga, const FieldState& a, const Grid1D& gb,
                              const FieldState& b, Window w = {}) {
  if (!ga.same_as(gb)) throw GridMismatch("l1_distance: states live on different grids");
  if (a.rho.size() != static_cast<std::size_t>(ga.n()) || b.rho.size() != a.rho.size())
    throw GridMismatch("l1_distance: state size does not match the grid");
  L1Distance d;
  for (int i = 0; i < ga.n(); ++i) {
    if (!w.contains(ga.x(i))) continue;
    d.d_rho += std::fabs(a.rho[i] - b.rho[i]);
    d.d_m += std::fabs(a.rho[i] * a.u[i] - b.rho[i] * b.u[i]);
  }
  d.d_rho *= ga.dx();
  d.d_m *= ga.dx();
  return d;
}

inline L1Distance l1_distance(const Grid1D& g, const FieldState& a, const FieldState& b, Window w = {}) {
  return l1_distance(g, a, g, b, w);
}

struct HigherIntegrability {
  double pressure = 0.0;            // int int_K rho p(rho)
  double pressure_capillary = 0.0;  // int int_K rho (rho kappa' + 5 kappa) rho_x^2
  double velocity = 0.0;            // int int_K rho |u|^3 + rho^(gamma + theta)
  double papillon_sup = 0.0;        // sup eps mu(rho) <rho>^theta
  double pressure_total() const { return pressure + pressure_capillary; }
};

// Space-time integrals over window x [t_0, t_last] (trapezoid in time, midpoint in space).
inline HigherIntegrability higher_integrability_ledgers(std::span<const FieldState> traj,
                                                        const ConstitutiveSet& c, const Grid1D& g,
                                                        Window w) {
  HigherIntegrability out;
  const double gamma = c.gamma();
  const double theta = 0.5 * (gamma - 1.0);
  std::array<double, 3> prev{}, cur{};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj[k];
    const auto pad = padded_rho(g, s.rho);
    const auto d = central_derivatives(g, pad);
    cur = {0.0, 0.0, 0.0};
    for (int i = 0; i < g.n(); ++i) {
      const double r = s.rho[i];
      out.papillon_sup =
          std::max(out.papillon_sup, c.mu_eps(r) * std::pow(std::sqrt(1.0 + r * r), theta));
      if (!w.contains(g.x(i)) || r <= 0.0) continue;
      cur[0] += r * c.p(r);
      if (!c.capillarity.is_zero())
        cur[1] += r * (r * c.dkappa_eps(r) + 5.0 * c.kappa_eps(r)) * d.d1[i] * d.d1[i];
      cur[2] += r * std::pow(std::fabs(s.u[i]), 3) + std::pow(r, gamma + theta);
    }
    for (double& v : cur) v *= g.dx();
    if (k > 0) {
      const double dt = s.t - traj[k - 1].t;
      out.pressure += 0.5 * dt * (prev[0] + cur[0]);
      out.pressure_capillary += 0.5 * dt * (prev[1] + cur[1]);
      out.velocity += 0.5 * dt * (prev[2] + cur[2]);
    }
    prev = cur;
  }
  return out;
}

// True when the outermost `cells` cells stay within tol (relative) of the far-field states.
inline bool boundary_quiet(const FieldState& s, const Grid1D& g, double tol = 1e-6, int cells = 2) {
  if (g.is_torus()) return true;
  const FarField l = g.left_state(), r = g.right_state();
  const double scale = std::max({l.rho, r.rho, 1.0});
  for (int k = 0; k < cells; ++k) {
    const int i = k, j = g.n() - 1 - k;
    if (std::fabs(s.rho[i] - l.rho) > tol * scale || std::fabs(s.u[i] - l.u) > tol * scale)
      return false;
    if (std::fabs(s.rho[j] - r.rho) > tol * scale || std::fabs(s.u[j] - r.u) > tol * scale)
      return false;
  }
  return true;
}

// max_t |M(t) - M(0)| / M(0). On a line the waves must stay inside the domain.
inline double mass_conservation_check(std::span<const FieldState> traj, const Grid1D& g,
                                      double boundary_tol = 1e-6) {
  if (traj.empty()) return 0.0;
  if (!g.is_torus())
    for (const auto& s : traj)
      if (!boundary_quiet(s, g, boundary_tol))
        throw PreconditionError("mass check invalid: waves reached the boundary at t = " +
                                std::to_string(s.t));
  const double m0 = integrate(g, traj.front().rho);
  if (m0 == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& s : traj) worst = std::max(worst, std::fabs(integrate(g, s.rho) - m0) / m0);
  return worst;
}

struct RiemannStates {
  double rho_l = 4.0, u_l = 0.0, rho_r = 1.0, u_r = 0.0;
};

struct SweepConfig {
  ConstitutiveSet base;
  std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
  DeltaRule delta_rule{};
  RiemannStates riemann{};
  double x_min = -3.5, x_max = 3.5;
  double dx_per_eps = 0.25;  // dx = dx_per_eps * eps
  double mollify_cells = 10.0;
  Window window{-1.6, 1.6};
  double T = 1.2;
  int snapshots = 24;
  SolverConfig solver{};
  bool allow_gamma_outside_limit_range = false;
  double trend_allowance = 0.1;
  double boundary_tol = 1e-6;
  int threads = 1;
};

struct SweepRow {
  double eps = 0.0, delta = 0.0, dx = 0.0;
  int n = 0;
  double d_rho = 0.0, d_m = 0.0;
  double d_rho_interior = 0.0, d_m_interior = 0.0;
  double tv = 0.0;
  double oscillation = 0.0;
  HigherIntegrability ledgers;
  double edscr_ratio = 0.0;
  double initial_energy = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;
  bool trend_ok = true;
  bool papillon_ok = true;
  std::string trend_note;
};

// Gas constants of the oracle, sharing the solver's pressure law.
inline GasConstants oracle_gas(const ConstitutiveSet& c) {
  const double gamma = c.gamma();
  if (!(gamma > 1.0)) throw DomainError("oracle needs gamma > 1");
  GasConstants g;
  g.gamma = gamma;
  g.theta = 0.5 * (gamma - 1.0);
  g.lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  g.p0 = c.pressure.coefficient;
  return g;
}

inline void check_sweep_preconditions(const SweepConfig& cfg) {
  if (cfg.eps_list.empty()) throw ConfigError("eps_list is empty");
  for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
    if (!(cfg.eps_list[k] > 0.0)) throw ConfigError("eps values must be positive");
    if (k > 0 && !(cfg.eps_list[k] < cfg.eps_list[k - 1]))
      throw ConfigError("eps_list must be strictly decreasing");
  }
  if (cfg.delta_rule.power < 2.0) throw ConfigError("delta(eps) must be O(eps^2)");
  auto require = [](const ConditionReport& r, const std::string& name) {
    const auto& e = r.at(name);
    if (e.verdict != Verdict::holds)
      throw PreconditionError("condition " + name + " does not hold: " +
                              (e.witness ? e.witness->describe() : e.note));
  };
  ConstitutiveSet c = cfg.base;
  c.delta_rule = cfg.delta_rule;
  require(check_tc(c), "tc_global");
  require(check_sc(c), "sc");
  require(check_gr(c), "gr_small_rho");
  require(check_gr(c), "gr_capillarity");
  const double gamma = cfg.base.gamma();
  if (!(gamma > 1.0)) throw PreconditionError("gamma must exceed 1");
  if (!cfg.allow_gamma_outside_limit_range && gamma > 5.0 / 3.0 + 1e-12)
    throw PreconditionError("gamma must lie in (1, 5/3] for the limit theorem");
}

// Riemann data smoothed by tanh at width mollify_cells * dx, on a line with far-field ghosts.
struct RiemannRun {
  Grid1D grid;
  FieldState initial;
};

inline RiemannRun riemann_initial_data(const RiemannStates& d, double x_min, double x_max, double dx,
                                       double mollify_cells) {
  const int n = static_cast<int>(std::lround((x_max - x_min) / dx));
  Grid1D g(Line{x_min, x_max, d.rho_r, FarField{d.rho_l, d.u_l}, FarField{d.rho_r, d.u_r}}, n);
  FieldState s{std::vector<double>(n), std::vector<double>(n), 0.0};
  const double w = mollify_cells * g.dx();
  for (int i = 0; i < n; ++i) {
    const double h = 0.5 * (1.0 + std::tanh(g.x(i) / w));
    s.rho[i] = d.rho_l + (d.rho_r - d.rho_l) * h;
    s.u[i] = d.u_l + (d.u_r - d.u_l) * h;
  }
  return {g, s};
}

inline double total_variation(std::span<const double> f, const Grid1D& g, Window w) {
  double tv = 0.0;
  for (int i = 0; i + 1 < g.n(); ++i)
    if (w.contains(g.x(i)) && w.contains(g.x(i + 1))) tv += std::fabs(f[i + 1] - f[i]);
  return tv;
}

inline SweepRow run_sweep_row(const SweepConfig& cfg, double eps) {
  ConstitutiveSet c = cfg.base;
  c.eps = eps;
  c.delta_rule = cfg.delta_rule;
  const double max_eps = cfg.eps_list.empty() ? eps : cfg.eps_list.front();
  auto [g, init] = riemann_initial_data(cfg.riemann, cfg.x_min, cfg.x_max, cfg.dx_per_eps * eps,
                                        cfg.mollify_cells);
  SolverConfig sc = cfg.solver;
  sc.t_end = cfg.T;
  sc.snapshot_dt = cfg.T / std::max(cfg.snapshots, 1);
  const auto tr = run(c, init, g, sc);
  const auto& last = tr.snapshots.back();
  if (!boundary_quiet(last, g, cfg.boundary_tol))
    throw PreconditionError("waves reached the domain boundary at eps = " + std::to_string(eps));

  RiemannData rd{cfg.riemann.rho_l, cfg.riemann.u_l, cfg.riemann.rho_r, cfg.riemann.u_r, oracle_gas(c)};
  const auto sol = solve_riemann(rd);
  const auto oracle = sample_on_grid(sol, g, cfg.T);

  SweepRow row;
  row.eps = eps;
  row.delta = c.delta();
  row.dx = g.dx();
  row.n = g.n();
  const auto full = l1_distance(g, last, oracle, cfg.window);
  row.d_rho = full.d_rho;
  row.d_m = full.d_m;
  const auto fronts = sol.kinks();
  const double margin = 5.0 * max_eps;
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    if (!cfg.window.contains(x)) continue;
    bool near = false;
    for (double xi : fronts) near = near || std::fabs(x - xi * cfg.T) < margin;
    if (near) continue;
    row.d_rho_interior += std::fabs(last.rho[i] - oracle.rho[i]) * g.dx();
    row.d_m_interior += std::fabs(last.rho[i] * last.u[i] - oracle.rho[i] * oracle.u[i]) * g.dx();
  }
  row.tv = total_variation(last.rho, g, cfg.window);
  row.oscillation = std::max(0.0, 0.5 * (row.tv - total_variation(oracle.rho, g, cfg.window)));
  row.ledgers = higher_integrability_ledgers(tr.snapshots, c, g, cfg.window);
  const auto led = edscr_ledger(c, tr.snapshots, g);
  row.edscr_ratio = led.edscr_ratio;
  row.initial_energy = led.initial_energy;
  row.steps = tr.steps;
  row.wall_seconds = tr.wall_seconds;
  return row;
}

// One NSK run per eps against the exact Euler solution at time T.
inline ConvergenceReport run_sweep(const SweepConfig& cfg) {
  check_sweep_preconditions(cfg);
  ConvergenceReport rep;
  rep.rows.resize(cfg.eps_list.size());
  parallel_for(cfg.eps_list.size(), cfg.threads,
               [&](std::size_t k) { rep.rows[k] = run_sweep_row(cfg, cfg.eps_list[k]); });
  const double allow = 1.0 + cfg.trend_allowance;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (rep.rows[k].d_rho > rep.rows[k - 1].d_rho * allow) {
      rep.trend_ok = false;
      rep.trend_note += "d_rho rises from eps=" + std::to_string(rep.rows[k - 1].eps) + " to eps=" +
                        std::to_string(rep.rows[k].eps) + "; ";
    }
    if (rep.rows[k].ledgers.papillon_sup > rep.rows[k - 1].ledgers.papillon_sup * allow)
      rep.papillon_ok = false;
  }
  return rep;
}

}  // namespace nsklab
