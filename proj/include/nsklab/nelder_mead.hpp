#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace nsklab {

struct NelderMeadResult {
  std::vector<double> x;
  double f = INFINITY;
  int evaluations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  int max_evals = 1000;
  double f_tol = 1e-12;
  double x_tol = 1e-10;
  // Stop as soon as a value below this is seen.
  double target = -INFINITY;
};

// Downhill simplex with the standard coefficients (1, 2, 1/2, 1/2).
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const std::vector<double>& step,
                             const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> s(n + 1, x0);
  std::vector<double> fv(n + 1);
  NelderMeadResult best;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++best.evaluations;
    const double vv = std::isnan(v) ? INFINITY : v;
    if (vv < best.f) {
      best.f = vv;
      best.x = x;
    }
    return vv;
  };
  for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) {
    fv[i] = eval(s[i]);
    if (best.f < opt.target) return best;
  }
  std::vector<std::size_t> idx(n + 1);
  std::vector<double> c(n), xr(n), xe(n), xc(n);
  while (best.evaluations < opt.max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t lo = idx[0], hi = idx[n], nh = idx[n - 1];
    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::fabs(s[i][k] - s[lo][k]));
    if (std::fabs(fv[hi] - fv[lo]) <= opt.f_tol * (std::fabs(fv[lo]) + 1e-300) + 1e-300 ||
        spread <= opt.x_tol) {
      best.converged = true;
      break;
    }
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != hi)
        for (std::size_t k = 0; k < n; ++k) c[k] += s[i][k] / n;
    for (std::size_t k = 0; k < n; ++k) xr[k] = c[k] + (c[k] - s[hi][k]);
    const double fr = eval(xr);
    if (best.f < opt.target) break;
    if (fr < fv[lo]) {
      for (std::size_t k = 0; k < n; ++k) xe[k] = c[k] + 2.0 * (c[k] - s[hi][k]);
      const double fe = eval(xe);
      if (fe < fr) {
        s[hi] = xe;
        fv[hi] = fe;
      } else {
        s[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[nh]) {
      s[hi] = xr;
      fv[hi] = fr;
    } else {
      const bool outside = fr < fv[hi];
      for (std::size_t k = 0; k < n; ++k)
        xc[k] = outside ? c[k] + 0.5 * (xr[k] - c[k]) : c[k] + 0.5 * (s[hi][k] - c[k]);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[hi])) {
        s[hi] = xc;
        fv[hi] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == lo) continue;
          for (std::size_t k = 0; k < n; ++k) s[i][k] = s[lo][k] + 0.5 * (s[i][k] - s[lo][k]);
          fv[i] = eval(s[i]);
        }
      }
    }
    if (best.f < opt.target) break;
  }
  return best;
}

}  // namespace nsklab
