#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nsklab/entropy.hpp"
#include "nsklab/errors.hpp"
#include "nsklab/grid.hpp"
#include "nsklab/quadrature.hpp"

namespace nsklab {

struct State {
  double rho = 0.0;
  double u = 0.0;
};

struct RiemannData {
  double rho_l = 1.0, u_l = 0.0, rho_r = 1.0, u_r = 0.0;
  GasConstants gas = GasConstants::from_gamma(2.0);
};

enum class WaveType { shock, rarefaction, vacuum };

inline const char* to_string(WaveType w) {
  switch (w) {
    case WaveType::shock: return "shock";
    case WaveType::rarefaction: return "rarefaction";
    default: return "vacuum";
  }
}

// A wave occupies xi in [lo, hi]; shocks have lo == hi.
struct Wave {
  WaveType type;
  int family;  // 1, 2, or 0 for the vacuum region
  double lo;
  double hi;
};

class RiemannSolution {
 public:
  RiemannSolution(RiemannData d, std::vector<Wave> waves, State star_l, State star_r)
      : d_(d), waves_(std::move(waves)), star_l_(star_l), star_r_(star_r) {}

  const RiemannData& data() const { return d_; }
  const std::vector<Wave>& waves() const { return waves_; }
  State left() const { return {d_.rho_l, d_.u_l}; }
  State right() const { return {d_.rho_r, d_.u_r}; }
  // Intermediate states next to the 1-wave and 2-wave (equal unless vacuum opens).
  State star_left() const { return star_l_; }
  State star_right() const { return star_r_; }
  bool has_vacuum() const {
    return std::any_of(waves_.begin(), waves_.end(), [](const Wave& w) { return w.type == WaveType::vacuum; });
  }

  double c(double rho) const { return d_.gas.sound_speed(rho); }
  double rho_from_c(double c) const {
    if (c <= 0.0) return 0.0;
    return std::pow(c / std::sqrt(d_.gas.p0 * d_.gas.gamma), 1.0 / d_.gas.theta);
  }
  double kappa2() const { return 2.0 / (d_.gas.gamma - 1.0); }

  State sample(double xi) const {
    const Wave* w1 = find(1);
    const Wave* w2 = find(2);
    if (!w1 && !w2) return left();
    if (w1 && xi < w1->lo) return left();
    if (w2 && xi > w2->hi) return right();
    if (w1 && xi <= w1->hi) {
      if (w1->type == WaveType::shock) return xi < w1->lo ? left() : star_l_;
      const double inv = d_.u_l + kappa2() * c(d_.rho_l);
      const double cc = (inv - xi) / (kappa2() + 1.0);
      return {rho_from_c(cc), xi + cc};
    }
    if (w2 && xi >= w2->lo) {
      if (w2->type == WaveType::shock) return xi > w2->hi ? right() : star_r_;
      const double inv = d_.u_r - kappa2() * c(d_.rho_r);
      const double cc = (xi - inv) / (kappa2() + 1.0);
      return {rho_from_c(cc), xi - cc};
    }
    const Wave* v = find(0);
    if (v && xi > v->lo && xi < v->hi) return {0.0, xi};
    if (v) return xi <= v->lo ? star_l_ : star_r_;
    return star_l_;
  }

  State sample(double x, double t) const {
    if (!(t > 0.0)) throw DomainError("sample needs t > 0");
    return sample(x / t);
  }

  // xi values where the solution is not smooth.
  std::vector<double> kinks() const {
    std::vector<double> k;
    for (const auto& w : waves_) {
      k.push_back(w.lo);
      if (w.hi != w.lo) k.push_back(w.hi);
    }
    std::sort(k.begin(), k.end());
    return k;
  }

 private:
  const Wave* find(int family) const {
    for (const auto& w : waves_)
      if (w.family == family) return &w;
    return nullptr;
  }

  RiemannData d_;
  std::vector<Wave> waves_;
  State star_l_, star_r_;
};

namespace detail {

struct WaveCurve {
  GasConstants g;
  double rho_k;
  double p(double r) const { return g.p0 * std::pow(r, g.gamma); }
  double c(double r) const { return g.sound_speed(r); }
  // velocity jump function and its derivative in rho
  std::pair<double, double> f(double r) const {
    if (r > rho_k) {
      const double dp = p(r) - p(rho_k), dr = r - rho_k, rr = r * rho_k;
      const double G = dp * dr / rr;
      const double dG = (g.gamma * p(r) / r * dr + dp) / rr - dp * dr / (r * rr);
      const double sq = std::sqrt(G);
      return {sq, sq > 0.0 ? 0.5 * dG / sq : c(rho_k) / rho_k};
    }
    const double k2 = 2.0 / (g.gamma - 1.0);
    return {k2 * (c(r) - c(rho_k)), r > 0.0 ? c(r) / r : INFINITY};
  }
};

}  // namespace detail

inline RiemannSolution solve_riemann(const RiemannData& d) {
  if (d.rho_l < 0.0 || d.rho_r < 0.0) throw DomainError("Riemann densities must be >= 0");
  const GasConstants& g = d.gas;
  const double k2 = 2.0 / (g.gamma - 1.0);
  const double cl = g.sound_speed(d.rho_l), cr = g.sound_speed(d.rho_r);

  if (d.rho_l == 0.0 && d.rho_r == 0.0)
    return RiemannSolution(d, {}, {0.0, 0.0}, {0.0, 0.0});
  if (d.rho_l == d.rho_r && d.u_l == d.u_r)
    return RiemannSolution(d, {}, {d.rho_l, d.u_l}, {d.rho_r, d.u_r});

  if (d.rho_r == 0.0) {
    const double edge = d.u_l + k2 * cl;
    return RiemannSolution(d, {{WaveType::rarefaction, 1, d.u_l - cl, edge}, {WaveType::vacuum, 0, edge, INFINITY}},
                           {0.0, edge}, {0.0, edge});
  }
  if (d.rho_l == 0.0) {
    const double edge = d.u_r - k2 * cr;
    return RiemannSolution(d, {{WaveType::vacuum, 0, -INFINITY, edge}, {WaveType::rarefaction, 2, edge, d.u_r + cr}},
                           {0.0, edge}, {0.0, edge});
  }

  const double du = d.u_r - d.u_l;
  if (du >= k2 * (cl + cr)) {
    const double el = d.u_l + k2 * cl, er = d.u_r - k2 * cr;
    return RiemannSolution(d,
                           {{WaveType::rarefaction, 1, d.u_l - cl, el},
                            {WaveType::vacuum, 0, el, er},
                            {WaveType::rarefaction, 2, er, d.u_r + cr}},
                           {0.0, el}, {0.0, er});
  }

  const detail::WaveCurve L{g, d.rho_l}, R{g, d.rho_r};
  auto F = [&](double r) {
    const auto a = L.f(r), b = R.f(r);
    return std::pair{a.first + b.first + du, a.second + b.second};
  };
  double lo = 1e-14, hi = std::max(d.rho_l, d.rho_r) * 1e3;
  while (F(hi).first < 0.0) {
    hi *= 10.0;
    if (hi > 1e300) throw ConvergenceError("Riemann: no upper bracket");
  }
  if (F(lo).first > 0.0) lo = 0.0;
  double r = 0.5 * (d.rho_l + d.rho_r);
  if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
  const double tol = 1e-13 * (1.0 + std::fabs(d.u_l) + std::fabs(d.u_r) + cl + cr);
  bool done = false;
  for (int it = 0; it < 500; ++it) {
    const auto [fv, fd] = F(r);
    if (std::fabs(fv) <= tol) {
      done = true;
      break;
    }
    if (fv < 0.0) lo = r;
    else hi = r;
    double next = r - fv / fd;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * hi) {
      r = next;
      done = true;
      break;
    }
    r = next;
  }
  if (!done) throw ConvergenceError("Riemann: Newton/bisection did not converge");

  const double fl = L.f(r).first, fr = R.f(r).first;
  const double us = 0.5 * (d.u_l + d.u_r) + 0.5 * (fr - fl);
  const double cs = g.sound_speed(r);
  std::vector<Wave> waves;
  if (r > d.rho_l) {
    const double s = (r * us - d.rho_l * d.u_l) / (r - d.rho_l);
    waves.push_back({WaveType::shock, 1, s, s});
  } else if (r < d.rho_l) {
    waves.push_back({WaveType::rarefaction, 1, d.u_l - cl, us - cs});
  }
  if (r > d.rho_r) {
    const double s = (r * us - d.rho_r * d.u_r) / (r - d.rho_r);
    waves.push_back({WaveType::shock, 2, s, s});
  } else if (r < d.rho_r) {
    waves.push_back({WaveType::rarefaction, 2, us + cs, d.u_r + cr});
  }
  return RiemannSolution(d, std::move(waves), {r, us}, {r, us});
}

// Closed-form vacuum criterion.
inline bool vacuum_expected(const RiemannData& d) {
  const double k2 = 2.0 / (d.gas.gamma - 1.0);
  return d.u_r - d.u_l >= k2 * (d.gas.sound_speed(d.rho_l) + d.gas.sound_speed(d.rho_r));
}

struct RankineHugoniot {
  double mass = 0.0;
  double momentum = 0.0;
};

// Residuals |s[rho] - [rho u]| and |s[rho u] - [rho u^2 + p]| for each shock.
inline std::vector<RankineHugoniot> rh_residuals(const RiemannSolution& sol) {
  std::vector<RankineHugoniot> out;
  const auto& g = sol.data().gas;
  auto p = [&](double r) { return g.p0 * std::pow(r, g.gamma); };
  for (const auto& w : sol.waves()) {
    if (w.type != WaveType::shock) continue;
    const State a = w.family == 1 ? sol.left() : sol.star_right();
    const State b = w.family == 1 ? sol.star_left() : sol.right();
    const double s = w.lo;
    out.push_back({std::fabs(s * (b.rho - a.rho) - (b.rho * b.u - a.rho * a.u)),
                   std::fabs(s * (b.rho * b.u - a.rho * a.u) -
                             (b.rho * b.u * b.u + p(b.rho) - a.rho * a.u * a.u - p(a.rho)))});
  }
  return out;
}

// Max deviation of the Riemann invariant across each rarefaction, sampled at n points.
inline double rarefaction_invariant_residual(const RiemannSolution& sol, int n = 64) {
  double worst = 0.0;
  const double k2 = sol.kappa2();
  for (const auto& w : sol.waves()) {
    if (w.type != WaveType::rarefaction) continue;
    const State ref = w.family == 1 ? sol.left() : sol.right();
    const double sign = w.family == 1 ? 1.0 : -1.0;
    const double inv = ref.u + sign * k2 * sol.c(ref.rho);
    for (int k = 0; k <= n; ++k) {
      const double xi = w.lo + (w.hi - w.lo) * k / n;
      const State s = sol.sample(xi);
      worst = std::max(worst, std::fabs(s.u + sign * k2 * sol.c(s.rho) - inv));
    }
  }
  return worst;
}

inline FieldState sample_on_grid(const RiemannSolution& sol, const Grid1D& g, double t) {
  if (!(t > 0.0)) throw DomainError("sample_on_grid needs t > 0");
  FieldState s{std::vector<double>(g.n()), std::vector<double>(g.n()), t};
  for (int i = 0; i < g.n(); ++i) {
    const State v = sol.sample(g.x(i), t);
    s.rho[i] = v.rho;
    s.u[i] = v.u;
  }
  return s;
}

// int eta dx |_{t2} - int eta dx |_{t1} + int_{t1}^{t2} (q(x1) - q(x0)) dt over the window [x0, x1].
inline double entropy_residual(const RiemannSolution& sol, const EntropyPair& pair, double x0,
                               double x1, double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > t1) || !(x1 > x0)) throw DomainError("bad entropy residual window");
  const auto kinks = sol.kinks();
  auto eta_at = [&](double xi) {
    const State s = sol.sample(xi);
    return pair.eta(s.rho, s.u);
  };
  auto q_at = [&](double xi) {
    const State s = sol.sample(xi);
    return pair.q(s.rho, s.u);
  };
  auto piecewise = [&](auto f, double a, double b, std::vector<double> cuts) {
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return !(c > a && c < b); }), cuts.end());
    cuts.insert(cuts.begin(), a);
    cuts.push_back(b);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      if (cuts[k + 1] > cuts[k]) s += quad::gk(f, cuts[k], cuts[k + 1], 1e-12);
    return s;
  };
  auto total_eta = [&](double t) {
    return t * piecewise(eta_at, x0 / t, x1 / t, kinks);
  };
  auto flux = [&](double x) {
    std::vector<double> cuts;
    for (double k : kinks)
      if (k != 0.0) cuts.push_back(x / k);
    return piecewise([&](double t) { return q_at(x / t); }, t1, t2, cuts);
  };
  return total_eta(t2) - total_eta(t1) + flux(x1) - flux(x0);
}

}  // namespace nsklab
