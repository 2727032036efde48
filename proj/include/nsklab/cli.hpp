#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "nsklab/coercivity.hpp"
#include "nsklab/conditions.hpp"
#include "nsklab/config.hpp"
#include "nsklab/energetics.hpp"
#include "nsklab/entropy.hpp"
#include "nsklab/harness.hpp"
#include "nsklab/io.hpp"
#include "nsklab/parallel.hpp"
#include "nsklab/riemann.hpp"
#include "nsklab/solver.hpp"

namespace nsklab {

namespace fs = std::filesystem;

struct DispatchContext {
  fs::path out_dir;
  int threads = 1;
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
};

namespace detail {

struct Outcome {
  int code = 0;
  Manifest manifest;
};

inline void print_conditions(std::ostream& os, const ConditionReport& r) {
  for (const auto& e : r.entries) {
    os << "  " << e.name << ": " << to_string(e.verdict) << (e.binding ? "" : " (non-binding)");
    if (e.witness) os << " [" << e.witness->describe() << "]";
    else if (!e.note.empty()) os << " [" << e.note << "]";
    os << '\n';
  }
  os << "  overall: " << to_string(r.overall()) << '\n';
}

inline Outcome run_conditions(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  const auto r = check_all(cfg.constitutive);
  *ctx.out << "conditions for pressure " << to_string(cfg.constitutive.pressure.exponent)
           << ", mu " << cfg.constitutive.viscosity.describe() << ", kappa "
           << cfg.constitutive.capillarity.describe() << ":\n";
  print_conditions(*ctx.out, r);
  CsvWriter w(ctx.out_dir / "conditions.csv", {"name", "verdict", "binding", "witness"});
  for (const auto& e : r.entries) {
    std::string why = e.witness ? e.witness->describe() : e.note;
    std::replace(why.begin(), why.end(), ',', ';');
    w.row({e.name, std::string(to_string(e.verdict)), std::string(e.binding ? "yes" : "no"), why});
  }
  Outcome o;
  o.manifest.outputs = {"conditions.csv"};
  o.manifest.extra["overall"] = to_string(r.overall());
  return o;
}

inline Outcome run_simulate(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  const Grid1D g = cfg.grid.build();
  const FieldState init = cfg.initial.build(g);
  const auto tr = run(cfg.constitutive, init, g, cfg.solver);
  CsvWriter snap(ctx.out_dir / "snapshots.csv", {"t", "x", "rho", "u", "m"});
  for (const auto& s : tr.snapshots)
    for (int i = 0; i < g.n(); ++i) snap.row({s.t, g.x(i), s.rho[i], s.u[i], s.rho[i] * s.u[i]});
  const auto led = edscr_ledger(cfg.constitutive, tr.snapshots, g);
  CsvWriter lw(ctx.out_dir / "ledger.csv",
               {"t", "mass", "E", "E_eff", "acc_visc", "acc_press", "acc_rhoxx", "acc_rhox4",
                "acc_Deff_signed", "vacuum_cells"});
  for (const auto& r : led.rows)
    lw.row({r.t, r.mass, r.E, r.E_eff, r.acc_visc, r.acc_press, r.acc_rhoxx, r.acc_rhox4,
            r.acc_Deff_signed, static_cast<long>(r.vacuum_cells)});
  *ctx.out << "simulate: " << tr.steps << " steps, EDscr ratio " << led.edscr_ratio << '\n';
  Outcome o;
  o.manifest.outputs = {"snapshots.csv", "ledger.csv"};
  o.manifest.steps = tr.steps;
  o.manifest.wall_seconds = tr.wall_seconds;
  o.manifest.extra["edscr_ratio"] = led.edscr_ratio;
  return o;
}

inline Outcome run_sweep_experiment(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  SweepConfig sc = cfg.sweep;
  sc.threads = ctx.threads;
  const auto rep = run_sweep(sc);
  CsvWriter w(ctx.out_dir / "sweep.csv",
              {"eps", "delta", "dx", "n", "d_rho", "d_m", "d_rho_interior", "d_m_interior", "tv",
               "oscillation", "ledger_pressure", "ledger_pressure_capillary", "ledger_velocity",
               "papillon_sup", "edscr_ratio", "initial_energy", "steps"});
  Outcome o;
  o.manifest.outputs = {"sweep.csv"};
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    w.row({r.eps, r.delta, r.dx, static_cast<long>(r.n), r.d_rho, r.d_m, r.d_rho_interior,
           r.d_m_interior, r.tv, r.oscillation, r.ledgers.pressure, r.ledgers.pressure_capillary,
           r.ledgers.velocity, r.ledgers.papillon_sup, r.edscr_ratio, r.initial_energy, r.steps});
    Manifest m;
    m.experiment = "sweep-run";
    m.config_text = cfg.source;
    m.seed = cfg.seed;
    m.steps = r.steps;
    m.wall_seconds = r.wall_seconds;
    m.extra = {{"eps", r.eps}, {"delta", r.delta}, {"n", r.n}};
    const std::string name = "manifest_run" + std::to_string(k) + ".json";
    m.write(ctx.out_dir / name);
    o.manifest.outputs.push_back(name);
    o.manifest.steps += r.steps;
    o.manifest.wall_seconds += r.wall_seconds;
    *ctx.out << "eps " << r.eps << ": d_rho " << r.d_rho << ", interior " << r.d_rho_interior << '\n';
  }
  o.manifest.extra["trend_ok"] = rep.trend_ok;
  o.manifest.extra["papillon_ok"] = rep.papillon_ok;
  if (!rep.trend_ok) {
    *ctx.err << "sweep: convergence trend failed: " << rep.trend_note << '\n';
    o.code = 2;
  }
  return o;
}

inline Outcome run_scan(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  AdversarialOptions opt = cfg.scan.options;
  opt.seed = cfg.seed;
  const auto pts = sc_scan(cfg.scan.alphas, cfg.scan.betas, opt, ctx.threads);
  CsvWriter w(ctx.out_dir / "coercivity_scan.csv",
              {"alpha", "beta", "min_value", "verdict", "closed_form", "margin", "family", "status"});
  int mismatches = 0, checked = 0;
  for (const auto& p : pts) {
    w.row({p.alpha, p.beta, p.min_value, std::string(to_string(p.verdict)),
           std::string(to_string(p.closed_form)), p.margin, p.family,
           std::string(p.status == SearchStatus::converged ? "converged" : "budget_exhausted")});
    if (std::fabs(p.margin) >= 0.1) {
      ++checked;
      if (p.verdict != p.closed_form) ++mismatches;
    }
  }
  *ctx.out << "coercivity scan: " << pts.size() << " points, " << checked
           << " away from the boundary, " << mismatches << " mismatches\n";
  Outcome o;
  o.manifest.outputs = {"coercivity_scan.csv"};
  o.manifest.extra = {{"points", pts.size()}, {"checked", checked}, {"mismatches", mismatches}};
  o.code = mismatches == 0 ? 0 : 2;
  return o;
}

inline Outcome run_sobolev(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  const auto& s = cfg.sobolev;
  CsvWriter w(ctx.out_dir / "sobolev.csv", {"kind", "index", "alpha", "eps", "ratio", "predicted"});
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<double>> coeffs(s.profiles);
  for (auto& c : coeffs) c = random_trig_coefficients(rng, s.modes, s.amplitude);
  std::vector<double> ratios(coeffs.size());
  parallel_for(coeffs.size(), ctx.threads, [&](std::size_t k) {
    ratios[k] = sobolev_sides(trig_profile(coeffs[k], s.cells), s.a).ratio / sobolev_constant(s.a);
  });
  double min_random = INFINITY;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    w.row({std::string("random"), static_cast<long>(k), NAN, NAN, ratios[k], 1.0});
    min_random = std::min(min_random, ratios[k]);
  }
  double min_ext = INFINITY;
  for (std::size_t k = 0; k < s.extremizers.size(); ++k) {
    const auto [al, ep] = s.extremizers[k];
    const auto p = extremizer_family(al, ep, s.cells).power(3.0 / (s.a + 2.0));
    const double r = sobolev_sides(p, s.a).ratio / sobolev_constant(s.a);
    min_ext = std::min(min_ext, r);
    w.row({std::string("extremizer"), static_cast<long>(k), al, ep, r, 1.0});
  }
  bool limits_ok = true;
  for (std::size_t k = 0; k < s.limit_alphas.size(); ++k) {
    const auto lim = extremizer_limit_ratio(s.limit_alphas[k]);
    limits_ok = limits_ok && std::fabs(lim.ratio / lim.predicted - 1.0) <= 0.05;
    w.row({std::string("limit_a1"), static_cast<long>(k), s.limit_alphas[k], 0.0, lim.ratio, lim.predicted});
  }
  *ctx.out << "sobolev a=" << s.a << ": min random ratio " << min_random << ", best extremizer "
           << min_ext << ", a=1 limits " << (limits_ok ? "ok" : "off") << '\n';
  Outcome o;
  o.manifest.outputs = {"sobolev.csv"};
  o.manifest.extra = {{"min_random_ratio", min_random}, {"best_extremizer_ratio", min_ext},
                      {"limits_ok", limits_ok}};
  const bool ok = (ratios.empty() || min_random >= 1.0 - 2e-3) &&
                  (s.extremizers.empty() || min_ext <= 1.10) && limits_ok;
  o.code = ok ? 0 : 2;
  return o;
}

inline Outcome run_riemann_experiment(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  const auto& st = cfg.riemann.states;
  const RiemannData d{st.rho_l, st.u_l, st.rho_r, st.u_r, oracle_gas(cfg.constitutive)};
  const auto sol = solve_riemann(d);
  const Grid1D g = cfg.grid_given ? cfg.grid.build() : Grid1D::line(-1.0, 1.0, 0.0, 400);
  const auto s = sample_on_grid(sol, g, cfg.riemann.t);
  CsvWriter w(ctx.out_dir / "riemann.csv", {"x", "rho", "u", "m"});
  for (int i = 0; i < g.n(); ++i) w.row({g.x(i), s.rho[i], s.u[i], s.rho[i] * s.u[i]});
  CsvWriter ww(ctx.out_dir / "waves.csv", {"type", "family", "xi_lo", "xi_hi"});
  for (const auto& wave : sol.waves())
    ww.row({std::string(to_string(wave.type)), static_cast<long>(wave.family), wave.lo, wave.hi});
  double rh = 0.0;
  for (const auto& r : rh_residuals(sol)) rh = std::max({rh, r.mass, r.momentum});
  const double inv = rarefaction_invariant_residual(sol);
  *ctx.out << "riemann: " << sol.waves().size() << " waves, star state rho " << sol.star_left().rho
           << " u " << sol.star_left().u << (sol.has_vacuum() ? ", vacuum" : "") << '\n';
  Outcome o;
  o.manifest.outputs = {"riemann.csv", "waves.csv"};
  o.manifest.extra = {{"rh_residual", rh}, {"rarefaction_residual", inv}, {"vacuum", sol.has_vacuum()}};
  o.code = rh <= 1e-10 && inv <= 1e-10 && sol.has_vacuum() == vacuum_expected(d) ? 0 : 2;
  return o;
}

inline Outcome run_entropy_table(const ExperimentConfig& cfg, const DispatchContext& ctx) {
  const auto& e = cfg.entropy;
  const auto pair = build_pair(GasConstants::from_gamma(cfg.constitutive.gamma()), e.psi);
  CsvWriter w(ctx.out_dir / "entropy_table.csv", {"rho", "u", "eta", "q", "eta_m", "eta_mu", "eta_mrho"});
  for (int i = 0; i < e.rho_count; ++i) {
    const double t = e.rho_count == 1 ? 0.0 : static_cast<double>(i) / (e.rho_count - 1);
    const double rho = std::exp(std::log(e.rho_min) + t * (std::log(e.rho_max) - std::log(e.rho_min)));
    for (int j = 0; j < e.u_count; ++j) {
      const double u = e.u_count == 1 ? e.u_min : e.u_min + (e.u_max - e.u_min) * j / (e.u_count - 1);
      const auto v = pair.evaluate(rho, u);
      w.row({rho, u, v.eta, v.q, v.eta_m, v.eta_mu, v.eta_mrho});
    }
  }
  *ctx.out << "entropy table (" << e.psi.name() << "): " << e.rho_count * e.u_count << " rows\n";
  Outcome o;
  o.manifest.outputs = {"entropy_table.csv"};
  return o;
}

}  // namespace detail

// Runs the configured experiment. Returns 0 on success, 2 when an asserted check fails, 1 on error.
inline int dispatch(const ExperimentConfig& cfg, DispatchContext ctx) {
  try {
    fs::create_directories(ctx.out_dir);
    detail::Outcome o;
    switch (cfg.experiment) {
      case Experiment::simulate: o = detail::run_simulate(cfg, ctx); break;
      case Experiment::sweep: o = detail::run_sweep_experiment(cfg, ctx); break;
      case Experiment::coercivity_scan: o = detail::run_scan(cfg, ctx); break;
      case Experiment::sobolev_test: o = detail::run_sobolev(cfg, ctx); break;
      case Experiment::riemann: o = detail::run_riemann_experiment(cfg, ctx); break;
      case Experiment::entropy_table: o = detail::run_entropy_table(cfg, ctx); break;
      case Experiment::conditions: o = detail::run_conditions(cfg, ctx); break;
    }
    o.manifest.experiment = to_string(cfg.experiment);
    o.manifest.config_text = cfg.source;
    o.manifest.seed = cfg.seed;
    o.manifest.write(ctx.out_dir / "manifest.json");
    return o.code;
  } catch (const std::exception& e) {
    *ctx.err << to_string(cfg.experiment) << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nsklab
