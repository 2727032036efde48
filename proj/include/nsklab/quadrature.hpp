#pragma once

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <queue>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "nsklab/errors.hpp"

namespace nsklab::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Jacobi rule for the weight (1-t)^a (1+t)^b on [-1, 1] (Golub-Welsch).
inline Rule gauss_jacobi_rule(int n, double a, double b) {
  if (n < 1 || !(a > -1.0) || !(b > -1.0)) throw DomainError("bad Gauss-Jacobi parameters");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag[k] = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    const double num = (k == 1) ? 4.0 * (1.0 + a) * (1.0 + b)
                                : 4.0 * k * (k + a) * (k + b) * (k + ab);
    const double den = (k == 1) ? (2.0 + ab) * (2.0 + ab) * (3.0 + ab)
                                : s * s * (s + 1.0) * (s - 1.0);
    sub[k - 1] = std::sqrt(num / den);
  }
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  if (n == 1) {
    r.nodes[0] = diag[0];
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = es.eigenvalues()[k];
    const double v = es.eigenvectors()(0, k);
    r.weights[k] = mu0 * v * v;
  }
  return r;
}

// Thread-safe cache keyed by (n, a, b).
inline const Rule& cached_jacobi_rule(int n, double a, double b) {
  static std::mutex m;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<Rule>(gauss_jacobi_rule(n, a, b));
  return *slot;
}

// Integral over [l, r] of f(s), where f behaves like (R - s)^A near the segment end R and
// like (s - L)^B near L. The power factors are absorbed into Gauss-Jacobi weights on the
// subsegments touching R or L; elsewhere f is sampled directly.
class JacobiAdaptive {
 public:
  JacobiAdaptive(double abs_tol, int max_depth = 48) : abs_tol_(abs_tol), max_depth_(max_depth) {}

  template <class F>
  double integrate(const F& f, double L, double R, double A, double B) {
    // global adaptivity: always split the segment with the largest error estimate
    std::priority_queue<Segment> heap;
    double total = 0.0, err = 0.0;
    auto push = [&](double l, double r, bool absorb_a, bool absorb_b, int depth) {
      const auto& r1 = cached_jacobi_rule(kLow, absorb_a ? A : 0.0, absorb_b ? B : 0.0);
      const auto& r2 = cached_jacobi_rule(kHigh, absorb_a ? A : 0.0, absorb_b ? B : 0.0);
      const double i1 = apply(f, r1, l, r, L, R, A, B, absorb_a, absorb_b);
      const double i2 = apply(f, r2, l, r, L, R, A, B, absorb_a, absorb_b);
      double e = std::fabs(i2 - i1);
      if (e <= 1e-15 * std::fabs(i2)) e = 0.0;
      total += i2;
      err += e;
      heap.push({e, i2, l, r, absorb_a, absorb_b, depth});
      ++segments_;
    };
    push(L, R, true, true, 0);
    while (err > abs_tol_ && !heap.empty() && heap.top().err > 0.0 && heap.top().depth < max_depth_) {
      if (segments_ + 2 > kMaxSegments) throw QuadratureError("adaptive Gauss-Jacobi: segment budget exhausted");
      const Segment s = heap.top();
      heap.pop();
      total -= s.value;
      err -= s.err;
      const double m = 0.5 * (s.l + s.r);
      push(s.l, m, false, s.absorb_b, s.depth + 1);
      push(m, s.r, s.absorb_a, false, s.depth + 1);
    }
    // re-sum to shed accumulated cancellation in the running totals
    total = 0.0;
    err = 0.0;
    for (; !heap.empty(); heap.pop()) {
      total += heap.top().value;
      err += heap.top().err;
    }
    err_ += err;
    return total;
  }

  double error_estimate() const { return err_; }

 private:
  struct Segment {
    double err, value, l, r;
    bool absorb_a, absorb_b;
    int depth;
    bool operator<(const Segment& o) const { return err < o.err; }
  };

  template <class F>
  double apply(const F& f, const Rule& rule, double l, double r, double L, double R, double A,
               double B, bool absorb_a, bool absorb_b) const {
    const double ea = absorb_a ? A : 0.0, eb = absorb_b ? B : 0.0;
    const double half = 0.5 * (r - l);
    const double scale = std::pow(half, 1.0 + ea + eb);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = rule.nodes[k];
      const double x = l + half * (1.0 + t);
      if ((absorb_a && ea != 0.0 && x >= R) || (absorb_b && eb != 0.0 && x <= L)) continue;
      double v = f(x);
      if (v == 0.0) continue;
      if (absorb_a && ea != 0.0) v /= std::pow(R - x, ea);
      if (absorb_b && eb != 0.0) v /= std::pow(x - L, eb);
      s += rule.weights[k] * v;
    }
    return scale * s;
  }

  static constexpr int kLow = 16;
  static constexpr int kHigh = 32;
  static constexpr int kMaxSegments = 20000;
  int segments_ = 0;
  double abs_tol_;
  int max_depth_;
  double err_ = 0.0;
};

// Adaptive Gauss-Kronrod (31-point) on [a, b].
template <class F>
double gk(const F& f, double a, double b, double rel_tol = 1e-12, double* err = nullptr,
          unsigned max_depth = 20) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &e);
  if (err) *err = e;
  return v;
}

}  // namespace nsklab::quad
