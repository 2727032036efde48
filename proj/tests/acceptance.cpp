#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nsklab/coercivity.hpp"
#include "nsklab/energetics.hpp"
#include "nsklab/entropy.hpp"
#include "nsklab/harness.hpp"
#include "nsklab/parallel.hpp"
#include "nsklab/riemann.hpp"
#include "nsklab/solver.hpp"
#include "oracles.hpp"

using namespace nsklab;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ConstitutiveSet reference_set(double eps) {
  ConstitutiveSet c;
  c.pressure = PowerLaw(0.125, 2.0);
  c.viscosity = PowerLaw(1.0, 1.0);
  c.capillarity = PowerLaw(1.0, -1.0);
  c.eps = eps;
  return c;
}

ConstitutiveSet power_set(double alpha, double beta) {
  ConstitutiveSet c;
  c.viscosity = PowerLaw(1.0, alpha);
  c.capillarity = PowerLaw(1.0, beta);
  return c;
}

FlowProfile sampled(int n, const std::vector<double>& coeffs) {
  const auto d = trig_descriptor(coeffs);
  const auto g = Grid1D::torus(1.0, n);
  std::vector<double> lf(n);
  for (int i = 0; i < n; ++i) lf[i] = d.jet(g.x(i)).g;
  return FlowProfile::from_log_samples(g, lf);
}

const int kThreads = resolve_threads(0);

CriterionResult criterion1() {
  std::vector<double> alphas, betas;
  for (int i = 0; i <= 40; ++i) alphas.push_back(0.05 * i);
  for (int j = 0; j <= 40; ++j) betas.push_back(-4.0 + 0.125 * j);
  const auto pts = sc_scan(alphas, betas, AdversarialOptions{}, kThreads);
  int checked = 0, mismatched = 0, exhausted = 0;
  for (const auto& p : pts) {
    if (p.status == SearchStatus::budget_exhausted) ++exhausted;
    if (std::fabs(p.margin) < 0.1) continue;
    ++checked;
    if (p.verdict != p.closed_form) ++mismatched;
  }
  return {mismatched == 0, fmt("%d points with |margin| >= 0.1, %d mismatches, %d budget-capped searches",
                               checked, mismatched, exhausted)};
}

CriterionResult criterion2() {
  const double a = 4.0;
  std::mt19937_64 rng(1);
  std::vector<std::vector<double>> coeffs(1000);
  for (auto& c : coeffs) c = random_trig_coefficients(rng, 4, 1.0);
  std::vector<double> ratios(coeffs.size());
  parallel_for(coeffs.size(), kThreads, [&](std::size_t k) {
    ratios[k] = sobolev_sides(trig_profile(coeffs[k], 256), a).ratio / sobolev_constant(a);
  });
  double min_random = INFINITY;
  for (double r : ratios) min_random = std::min(min_random, r);
  double best = INFINITY;
  for (double eps : {1e-100, 1e-200, 1e-280}) {
    const auto p = extremizer_family(1.001, eps, 256).power(3.0 / (a + 2.0));
    best = std::min(best, sobolev_sides(p, a).ratio / sobolev_constant(a));
  }
  double worst_limit = 0.0;
  for (double al : {1.1, 1.5, 2.0}) {
    const auto lim = extremizer_limit_ratio(al);
    worst_limit = std::max(worst_limit, std::fabs(lim.ratio / lim.predicted - 1.0));
  }
  const bool ok = min_random >= 1.0 - 2e-3 && best <= 1.10 && worst_limit <= 0.05;
  return {ok, fmt("min random ratio %.6f, best extremizer ratio %.4f, worst a=1 limit deviation %.2e",
                  min_random, best, worst_limit)};
}

CriterionResult criterion3() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 2.0), ub(-4.0, 1.0), ulr(std::log(1e-3), std::log(1e3));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double al = ua(rng), be = ub(rng), rho = std::exp(ulr(rng));
    const double oracle = zeta_oracle(1.0, al, 1.0, be, rho);
    const auto c = power_set(al, be);
    for (double v : {zeta_power_law(al, be, rho), evaluate_zeta(c, rho)}) {
      const double rel = oracle == 0.0 ? std::fabs(v) : std::fabs(v - oracle) / std::fabs(oracle);
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-10, fmt("worst relative deviation %.2e over 20 points", worst)};
}

CriterionResult criterion4() {
  double worst = 0.0;
  bool tables = true;
  std::string failed;
  for (double gamma : {1.4, 5.0 / 3.0, 2.0}) {
    const auto g = GasConstants::from_gamma(gamma);
    ConstitutiveSet c;
    c.pressure = g.pressure();
    const auto one = build_pair(g, EntropySpec::monomial(0));
    const auto quad = build_pair(g, EntropySpec::monomial(2, 0.5));
    for (double rho : {1e-3, 1e-1, 1.0, 10.0, 1e3})
      for (double u : {-2.0, 0.0, 0.7, 3.0}) {
        const double m = g.c_lambda() * rho;
        worst = std::max(worst, std::fabs(one.eta(rho, u) - m) / m);
        const double E = 0.5 * rho * u * u + rho * internal_energy(c, rho);
        worst = std::max(worst, std::fabs(quad.eta(rho, u) / g.c_lambda() - E) / E);
      }
    std::vector<std::pair<std::string, BoundReport>> reports;
    reports.emplace_back("cubic", check_bounds_cubic(g, build_pair(g, EntropySpec::cubic_signed())));
    for (double a : {0.25, 0.5, 1.0})
      reports.emplace_back(fmt("power a=%.2f", a),
                           check_bounds_power(g, a, build_pair(g, EntropySpec::abs_power(a)),
                                              build_pair(g, EntropySpec::signed_power(a))));
    reports.emplace_back("compact", check_boundpsi(g, build_pair(g, EntropySpec::compact(0.0, 1.0))));
    for (const auto& [name, r] : reports)
      for (const auto& chk : r.checks)
        if (!chk.holds || !std::isfinite(chk.constant)) {
          tables = false;
          failed += fmt(" [gamma=%.3f %s %s]", gamma, name.c_str(), chk.name.c_str());
        }
  }
  return {worst <= 1e-8 && tables,
          fmt("worst identity deviation %.2e, bound tables %s", worst, tables ? "hold" : "fail") + failed};
}

CriterionResult criterion5() {
  double rh = 0.0, inv = 0.0;
  int cases = 0, vacuum_mismatch = 0;
  for (double gamma : {1.4, 5.0 / 3.0, 2.0, 3.0}) {
    const auto gas = GasConstants::from_gamma(gamma);
    for (double rl : {0.1, 1.0, 4.0})
      for (double rr : {0.1, 1.0, 4.0})
        for (double du : {-3.0, -0.5, 0.0, 0.5, 3.0, 8.0}) {
          const RiemannData d{rl, 0.0, rr, du, gas};
          const auto sol = solve_riemann(d);
          for (const auto& r : rh_residuals(sol)) rh = std::max({rh, r.mass, r.momentum});
          inv = std::max(inv, rarefaction_invariant_residual(sol));
          if (sol.has_vacuum() != vacuum_expected(d)) ++vacuum_mismatch;
          ++cases;
        }
    // data on both sides of the vacuum threshold
    const double k2 = 2.0 / (gamma - 1.0);
    const double thr = k2 * (gas.sound_speed(1.0) + gas.sound_speed(2.0));
    for (double f : {1.0 - 1e-9, 1.0 + 1e-9}) {
      const RiemannData d{1.0, 0.0, 2.0, thr * f, gas};
      if (solve_riemann(d).has_vacuum() != vacuum_expected(d)) ++vacuum_mismatch;
      ++cases;
    }
  }
  const bool ok = rh <= 1e-10 && inv <= 1e-10 && vacuum_mismatch == 0;
  return {ok, fmt("%d cases, max RH residual %.2e, max invariant residual %.2e, %d vacuum mismatches",
                  cases, rh, inv, vacuum_mismatch)};
}

CriterionResult criterion6() {
  const auto c = reference_set(1e-2);
  const auto g = Grid1D::torus(1.0, 4096);
  FieldState s{std::vector<double>(g.n()), std::vector<double>(g.n(), 0.0), 0.0};
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    s.rho[i] = 1.0 + 0.5 * (std::tanh((x - 0.25) / 0.02) - std::tanh((x - 0.75) / 0.02));
  }
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.snapshot_dt = 0.005;
  const auto t0 = std::chrono::steady_clock::now();
  const auto tr = run(c, s, g, cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double mass = mass_conservation_check(tr.snapshots, g);
  const auto led = edscr_ledger(c, tr.snapshots, g);
  double drift = 0.0, eff_sup = -INFINITY;
  const double e0 = led.rows.front().E;
  for (std::size_t k = 0; k < led.rows.size(); ++k) {
    eff_sup = std::max(eff_sup, led.rows[k].E_eff);
    if (k == 0) continue;
    const double dt = led.rows[k].t - led.rows[k - 1].t;
    drift = std::max(drift, (led.rows[k].E - led.rows[k - 1].E) / (e0 * dt));
  }
  const double eff_ratio = eff_sup / led.initial_energy;
  const bool ok = mass <= 1e-12 * tr.steps && drift <= 1e-3 && eff_ratio <= 1.05 && wall <= 300.0;
  return {ok, fmt("%ld steps in %.1f s, mass drift %.2e, max E* rise rate %.2e, sup E_eff ratio %.4f, "
                  "EDscr ratio %.4f",
                  tr.steps, wall, mass, drift, eff_ratio, led.edscr_ratio)};
}

CriterionResult criterion7() {
  SweepConfig cfg;
  cfg.base = reference_set(0.1);
  cfg.allow_gamma_outside_limit_range = true;
  cfg.solver.scheme = HyperbolicScheme::muscl;
  cfg.threads = kThreads;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_sweep(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto band = [&](auto field) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : rep.rows) {
      const double v = field(r) / r.initial_energy;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi / lo;
  };
  const double bp = band([](const SweepRow& r) { return r.ledgers.pressure; });
  const double bv = band([](const SweepRow& r) { return r.ledgers.velocity; });
  std::string d;
  for (const auto& r : rep.rows) d += fmt("%.4f ", r.d_rho);
  const bool ok = rep.trend_ok && bp <= 3.0 && bv <= 3.0 && wall <= 1800.0;
  return {ok, fmt("d_rho %s(trend %s), ledger bands %.3f %.3f, %.1f s", d.c_str(),
                  rep.trend_ok ? "ok" : "broken", bp, bv, wall)};
}

double fd_order(const std::function<double(double)>& f, double exact, double h) {
  auto err = [&](double s) { return std::fabs((f(s) - f(-s)) / (2.0 * s) - exact); };
  return std::log2(err(h) / err(0.5 * h));
}

CriterionResult criterion8() {
  // pre- vs post-integration-by-parts
  const auto c = power_set(1.2, -0.7);
  const std::vector<double> coeffs{0.4, -0.3, 0.2, 0.1};
  const double exact = dhat_functional(c, trig_profile(coeffs, 64));
  std::vector<double> e;
  for (int n : {128, 256, 512}) e.push_back(std::fabs(dhat_pre_ibp(c, sampled(n, coeffs)) - exact));
  const double ibp = std::min(std::log2(e[0] / e[1]), std::log2(e[1] / e[2]));

  // sum-of-squares form inside the cone
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.0, 2.0), ub(-4.0, 1.0);
  double sos = 0.0;
  int pairs = 0;
  while (pairs < 10) {
    const double al = ua(rng), be = ub(rng);
    const auto form = sos_form(al, be);
    if (!form.defined) continue;
    ++pairs;
    const auto cs = power_set(al, be);
    for (int k = 0; k < 10; ++k) {
      const auto f = sampled(1024, random_trig_coefficients(rng, 4, 0.5));
      const double d = dhat_functional(cs, f);
      for (double root : {form.root_minus, form.root_plus})
        sos = std::max(sos, std::fabs(dhat_sos(cs, f, root) - d) / std::fabs(d));
    }
  }

  // entropy derivative evaluators vs centered differences
  double order = INFINITY;
  for (double gamma : {1.4, 2.0}) {
    const auto g = GasConstants::from_gamma(gamma);
    for (const auto& spec : {EntropySpec::compact(0.2, 1.5), EntropySpec::compact(-0.5, 3.0)}) {
      const auto p = build_pair(g, spec);
      for (auto [rho, u] : {std::pair{0.7, 0.3}, std::pair{2.0, -0.4}}) {
        const double h = 1e-2;
        order = std::min(order, fd_order([&](double d) { return p.eta(rho, u + d) / rho; }, p.eta_m(rho, u), h));
        order = std::min(order, fd_order([&](double d) { return p.eta_m(rho, u + d); }, p.eta_mu(rho, u), h));
        order = std::min(order, fd_order([&](double d) { return p.eta_m(rho + d, u); }, p.eta_mrho(rho, u), h));
      }
    }
  }
  const bool ok = ibp >= 1.8 && pairs > 0 && sos <= 1e-3 && order >= 1.9;
  return {ok, fmt("IBP order %.3f, SOS worst relative %.2e over %d cone pairs x 10 profiles, entropy FD order %.3f", ibp,
                  sos, pairs, order)};
}

}  // namespace

int main() {
  const std::vector<std::function<CriterionResult()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult v;
    try {
      v = criteria[k]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("Criterion %zu: %s (%s; %.1f s)\n", k + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str(), wall);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
