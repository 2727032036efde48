#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsklab/conditions.hpp"
#include "nsklab/constitutive.hpp"
#include "nsklab/energetics.hpp"
#include "nsklab/errors.hpp"
#include "nsklab/grid.hpp"
#include "nsklab/nelder_mead.hpp"
#include "nsklab/parallel.hpp"
#include "nsklab/quadrature.hpp"

namespace nsklab {

// Logarithmic jet of a positive profile: g = log f and its first two derivatives.
struct LogJet {
  double g = 0.0, gx = 0.0, gxx = 0.0;
  // f_xx / f
  double h() const { return gxx + gx * gx; }
};

struct AnalyticDescriptor {
  std::string family;
  std::vector<double> params;
  std::function<LogJet(double)> jet;
  // Integration segments: sorted nodes from x_lo to x_hi covering one period (or the line).
  std::vector<double> breakpoints;
};

class FlowProfile {
 public:
  static FlowProfile from_samples(Grid1D g, std::vector<double> f) {
    std::vector<double> lf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!(f[i] > 0.0) || !std::isfinite(f[i])) throw DomainError("profile must be positive");
      lf[i] = std::log(f[i]);
    }
    return FlowProfile(std::move(g), std::move(lf), std::nullopt);
  }

  static FlowProfile from_log_samples(Grid1D g, std::vector<double> log_f) {
    return FlowProfile(std::move(g), std::move(log_f), std::nullopt);
  }

  static FlowProfile from_analytic(Grid1D g, AnalyticDescriptor d) {
    if (d.breakpoints.size() < 2) throw DomainError("analytic profile needs an integration range");
    std::vector<double> lf(g.n());
    for (int i = 0; i < g.n(); ++i) lf[i] = d.jet(g.x(i)).g;
    if (g.is_torus()) {
      const double a = d.jet(d.breakpoints.front()).g, b = d.jet(d.breakpoints.back()).g;
      if (std::fabs(a - b) > 1e-12 * (1.0 + std::fabs(a)))
        throw DomainError("analytic profile is not periodic");
    }
    return FlowProfile(std::move(g), std::move(lf), std::move(d));
  }

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& log_values() const { return log_f_; }
  std::vector<double> values() const {
    std::vector<double> f(log_f_.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(log_f_[i]);
    return f;
  }
  const std::optional<AnalyticDescriptor>& analytic() const { return analytic_; }

  // f^q
  FlowProfile power(double q) const {
    std::vector<double> lf = log_f_;
    for (double& v : lf) v *= q;
    std::optional<AnalyticDescriptor> d;
    if (analytic_) {
      d = *analytic_;
      d->family += "^" + std::to_string(q);
      d->jet = [j = analytic_->jet, q](double x) {
        const LogJet s = j(x);
        return LogJet{q * s.g, q * s.gx, q * s.gxx};
      };
    }
    return FlowProfile(grid_, std::move(lf), std::move(d));
  }

  // lambda * f
  FlowProfile scaled(double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("scale factor must be positive");
    const double s = std::log(lambda);
    std::vector<double> lf = log_f_;
    for (double& v : lf) v += s;
    std::optional<AnalyticDescriptor> d;
    if (analytic_) {
      d = *analytic_;
      d->jet = [j = analytic_->jet, s](double x) {
        LogJet r = j(x);
        r.g += s;
        return r;
      };
    }
    return FlowProfile(grid_, std::move(lf), std::move(d));
  }

 private:
  FlowProfile(Grid1D g, std::vector<double> lf, std::optional<AnalyticDescriptor> d)
      : grid_(std::move(g)), log_f_(std::move(lf)), analytic_(std::move(d)) {
    if (static_cast<int>(log_f_.size()) != grid_.n()) throw GridMismatch("profile size != grid size");
    for (double v : log_f_)
      if (!std::isfinite(v)) throw DomainError("profile must be positive and finite");
    if (!grid_.is_torus() && !analytic_) {
      const double star = grid_.rho_star();
      const double fmax = std::exp(*std::max_element(log_f_.begin(), log_f_.end()));
      const double tol = 1e-12 * std::max(std::fabs(star), fmax);
      if (std::fabs(std::exp(log_f_.front()) - star) > tol ||
          std::fabs(std::exp(log_f_.back()) - star) > tol)
        throw DomainError("profile does not match the far field");
    }
  }

  Grid1D grid_;
  std::vector<double> log_f_;
  std::optional<AnalyticDescriptor> analytic_;
};

namespace detail {

struct SampledDerivs {
  std::vector<double> f, fx, fxx;
};

inline SampledDerivs sampled_derivs(const FlowProfile& p) {
  const auto& g = p.grid();
  SampledDerivs s{p.values(), {}, {}};
  const auto pad = g.is_torus() ? padded(g, s.f, 0.0, 0.0) : padded(g, s.f, g.rho_star(), g.rho_star());
  auto d = central_derivatives(g, pad);
  s.fx = std::move(d.d1);
  s.fxx = std::move(d.d2);
  return s;
}

// Log-sum-exp accumulator for positive terms of wildly varying magnitude.
struct LogSum {
  double m = -INFINITY, s = 0.0;
  void add(double log_v, double w) {
    if (log_v == -INFINITY || w == 0.0) return;
    if (log_v > m) {
      s = s * std::exp(m - log_v) + w;
      m = log_v;
    } else {
      s += w * std::exp(log_v - m);
    }
  }
  double log_value() const { return s > 0.0 ? m + std::log(s) : -INFINITY; }
};

// Integral of exp(L(x)) over the descriptor's segments, returned as a logarithm.
template <class LogIntegrand>
double log_integral(const AnalyticDescriptor& d, LogIntegrand&& L, double x0, double x1) {
  const auto& rule = quad::cached_jacobi_rule(20, 0.0, 0.0);
  const auto& rule2 = quad::cached_jacobi_rule(40, 0.0, 0.0);
  LogSum total;
  std::vector<double> nodes;
  nodes.push_back(x0);
  for (double b : d.breakpoints)
    if (b > x0 && b < x1) nodes.push_back(b);
  nodes.push_back(x1);
  std::function<void(double, double, int)> seg = [&](double l, double r, int depth) {
    LogSum a, b;
    const double half = 0.5 * (r - l);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      a.add(L(l + half * (1.0 + rule.nodes[k])), rule.weights[k] * half);
    for (std::size_t k = 0; k < rule2.nodes.size(); ++k)
      b.add(L(l + half * (1.0 + rule2.nodes[k])), rule2.weights[k] * half);
    const double la = a.log_value(), lb = b.log_value();
    const bool close = (la == -INFINITY && lb == -INFINITY) || std::fabs(la - lb) <= 1e-11;
    if (close || depth >= 14) {
      total.add(lb, 1.0);
      return;
    }
    const double m = 0.5 * (l + r);
    seg(l, m, depth + 1);
    seg(m, r, depth + 1);
  };
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    if (nodes[k + 1] > nodes[k]) seg(nodes[k], nodes[k + 1], 0);
  return total.log_value();
}

inline double log_abs(double v) { return v == 0.0 ? -INFINITY : std::log(std::fabs(v)); }

}  // namespace detail

struct SobolevReport {
  double lhs = 0.0;
  double rhs_raw = 0.0;
  double ratio = 0.0;
  double predicted_constant = 0.0;
};

inline double sobolev_constant(double a) { return (a - 1.0) * (a - 1.0) / 9.0; }

inline SobolevReport make_sobolev_report(double log_lhs, double log_rhs, double a) {
  SobolevReport r;
  r.lhs = std::exp(log_lhs);
  r.rhs_raw = std::exp(log_rhs);
  r.ratio = log_rhs == -INFINITY ? (log_lhs == -INFINITY ? 0.0 : INFINITY) : std::exp(log_lhs - log_rhs);
  r.predicted_constant = sobolev_constant(a);
  return r;
}

// Both sides of int f^a f_xx^2 >= C int f^(a-2) f_x^4 over [x0, x1]. Analytic profiles use
// exact jets; sampled ones use central differences and the midpoint rule (cells centred in the window).
inline SobolevReport sobolev_sides_window(const FlowProfile& p, double a, double x0, double x1) {
  if (const auto& d = p.analytic()) {
    const double b = a + 2.0;
    auto L_lhs = [&](double x) {
      const LogJet j = d->jet(x);
      return b * j.g + 2.0 * detail::log_abs(j.h());
    };
    auto L_rhs = [&](double x) {
      const LogJet j = d->jet(x);
      return b * j.g + 4.0 * detail::log_abs(j.gx);
    };
    return make_sobolev_report(detail::log_integral(*d, L_lhs, x0, x1),
                               detail::log_integral(*d, L_rhs, x0, x1), a);
  }
  const auto s = detail::sampled_derivs(p);
  const auto& g = p.grid();
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    if (x < x0 || x > x1) continue;
    const double f = s.f[i], fx = s.fx[i], fxx = s.fxx[i];
    lhs += std::pow(f, a) * fxx * fxx;
    rhs += std::pow(f, a - 2.0) * fx * fx * fx * fx;
  }
  return make_sobolev_report(std::log(lhs * g.dx()), std::log(rhs * g.dx()), a);
}

inline SobolevReport sobolev_sides(const FlowProfile& p, double a) {
  if (const auto& d = p.analytic())
    return sobolev_sides_window(p, a, d->breakpoints.front(), d->breakpoints.back());
  const auto& g = p.grid();
  return sobolev_sides_window(p, a, g.x_min(), g.x_min() + g.length());
}

// exp(sum_k a_k cos(2 pi k x / L) + b_k sin(2 pi k x / L)) on a torus; coeffs = (a_1, b_1, a_2, ...).
inline AnalyticDescriptor trig_descriptor(std::vector<double> coeffs, double length = 1.0) {
  const int m = static_cast<int>(coeffs.size() / 2);
  AnalyticDescriptor d;
  d.family = "trig";
  d.params = coeffs;
  d.jet = [coeffs, m, length](double x) {
    LogJet j;
    for (int k = 1; k <= m; ++k) {
      const double w = 2.0 * std::numbers::pi * k / length;
      const double c = std::cos(w * x), s = std::sin(w * x);
      const double a = coeffs[2 * (k - 1)], b = coeffs[2 * (k - 1) + 1];
      j.g += a * c + b * s;
      j.gx += w * (-a * s + b * c);
      j.gxx += -w * w * (a * c + b * s);
    }
    return j;
  };
  const int segs = std::max(8, 4 * m);
  for (int k = 0; k <= segs; ++k) d.breakpoints.push_back(length * k / segs);
  return d;
}

inline FlowProfile trig_profile(std::vector<double> coeffs, int n, double length = 1.0) {
  return FlowProfile::from_analytic(Grid1D::torus(length, n), trig_descriptor(std::move(coeffs), length));
}

// Random trig profile with `modes` modes and coefficients uniform in [-amp, amp].
template <class Rng>
std::vector<double> random_trig_coefficients(Rng& rng, int modes, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> c(2 * modes);
  for (double& v : c) v = u(rng);
  return c;
}

// (eps + x^2)^(alpha/2) on |x| <= 1/4 of the torus (-1/2, 1/2], joined at |x| = 1/4 by a
// monotone quartic that is C^2 there and constant with zero first and second derivative at 1/2.
inline AnalyticDescriptor extremizer_descriptor(double alpha, double eps) {
  if (!(alpha > 1.0) || !(eps > 0.0)) throw DomainError("extremizer needs alpha > 1 and eps > 0");
  constexpr double X = 0.25, Y = 0.25;
  const double S = eps + X * X;
  const double f0 = std::pow(S, 0.5 * alpha);
  const double f1 = alpha * X * std::pow(S, 0.5 * alpha - 1.0);
  const double f2 = alpha * (eps + (alpha - 1.0) * X * X) * std::pow(S, 0.5 * alpha - 2.0);
  const double c4 = (f1 + 0.5 * f2 * Y) / (2.0 * Y * Y * Y);
  const double c3 = -(f2 + 12.0 * c4 * Y * Y) / (6.0 * Y);
  AnalyticDescriptor d;
  d.family = "extremizer";
  d.params = {alpha, eps};
  d.jet = [=](double x) {
    x -= std::round(x);
    const double ax = std::fabs(x), sg = x < 0.0 ? -1.0 : 1.0;
    if (ax <= X) {
      const double s = eps + x * x;
      return LogJet{0.5 * alpha * std::log(s), alpha * x / s,
                    alpha * (eps - x * x) / s / s};
    }
    const double y = std::min(ax, 0.5) - X;
    const double P = f0 + y * (f1 + y * (0.5 * f2 + y * (c3 + y * c4)));
    const double P1 = f1 + y * (f2 + y * (3.0 * c3 + y * 4.0 * c4));
    const double P2 = f2 + y * (6.0 * c3 + y * 12.0 * c4);
    const double r = P1 / P;
    return LogJet{std::log(P), sg * r, P2 / P - r * r};
  };
  std::vector<double> pos;
  const double root = std::sqrt(eps);
  for (int k = -6;; ++k) {
    const double x = root * std::pow(10.0, 0.5 * k);
    if (x >= X) break;
    pos.push_back(x);
  }
  pos.push_back(X);
  d.breakpoints.push_back(-0.5);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) d.breakpoints.push_back(-*it);
  d.breakpoints.push_back(0.0);
  for (double x : pos) d.breakpoints.push_back(x);
  d.breakpoints.push_back(0.5);
  return d;
}

inline FlowProfile extremizer_family(double alpha, double eps, int n) {
  return FlowProfile::from_analytic(Grid1D::torus(1.0, n), extremizer_descriptor(alpha, eps));
}

struct ExtremizerLimit {
  double ratio = 0.0;      // extrapolated lhs / rhs on |x| <= 1/4 at a = 1
  double predicted = 0.0;  // ((alpha - 1) / alpha)^2
  double lhs = 0.0, rhs = 0.0;
  std::vector<double> raw_ratios;
};

// eps -> 0 limit of the inner-region a = 1 ratio by Richardson extrapolation with the basis
// {1, eps^p, eps}, p = (3 alpha - 3) / 2 (eps log eps replaces eps^p when p is near 1).
inline ExtremizerLimit extremizer_limit_ratio(double alpha,
                                              std::vector<double> eps_list = {1e-3, 1e-4, 1e-5}) {
  if (eps_list.size() != 3) throw DomainError("extrapolation uses three eps values");
  const double p = 1.5 * (alpha - 1.0);
  Eigen::Matrix3d A;
  Eigen::Vector3d bl, br;
  ExtremizerLimit out;
  for (int k = 0; k < 3; ++k) {
    const double e = eps_list[k];
    const auto prof = extremizer_family(alpha, e, 16);
    const auto r = sobolev_sides_window(prof, 1.0, -0.25, 0.25);
    out.raw_ratios.push_back(r.ratio);
    A(k, 0) = 1.0;
    A(k, 1) = std::fabs(p - 1.0) < 0.05 ? e * std::log(e) : std::pow(e, p);
    A(k, 2) = e;
    bl[k] = r.lhs;
    br[k] = r.rhs_raw;
  }
  const auto qr = A.colPivHouseholderQr();
  out.lhs = qr.solve(bl)[0];
  out.rhs = qr.solve(br)[0];
  out.ratio = out.lhs / out.rhs;
  out.predicted = std::pow((alpha - 1.0) / alpha, 2);
  return out;
}

// D-hat integrand coefficients for power laws: mu kappa / rho * rho_xx^2 = m0 k0 exp(b g) h^2 and
// zeta rho_x^4 mu kappa / rho = -K m0 k0 exp(b g) gx^4 with b = alpha + beta + 1.
struct PowerDhat {
  double b = 0.0;
  double K = 0.0;
  double scale = 1.0;
};

inline PowerDhat power_dhat(const ConstitutiveSet& c) {
  if (c.capillarity.is_zero()) throw DomainError("D-hat needs nonzero capillarity");
  if (!c.power_class()) throw DomainError("power-law coefficients required");
  const double a = c.alpha(), be = c.beta();
  return {a + be + 1.0, (be * (be - 1.0) + 2.0 * (a - 1.0) * (a - 2.0)) / 6.0,
          c.viscosity.power().coefficient * c.capillarity.power().coefficient};
}

// D-hat = int (rho_xx^2 + zeta(rho) rho_x^4) mu kappa / rho.
inline double dhat_functional(const ConstitutiveSet& c, const FlowProfile& rho) {
  if (c.capillarity.is_zero()) throw DomainError("D-hat needs nonzero capillarity");
  if (const auto& d = rho.analytic(); d && c.power_class()) {
    const auto pd = power_dhat(c);
    auto La = [&](double x) {
      const LogJet j = d->jet(x);
      return pd.b * j.g + 2.0 * detail::log_abs(j.h());
    };
    auto Lb = [&](double x) {
      const LogJet j = d->jet(x);
      return pd.b * j.g + 4.0 * detail::log_abs(j.gx);
    };
    const double x0 = d->breakpoints.front(), x1 = d->breakpoints.back();
    const double A = std::exp(detail::log_integral(*d, La, x0, x1));
    const double B = std::exp(detail::log_integral(*d, Lb, x0, x1));
    return pd.scale * (A - pd.K * B);
  }
  const auto s = detail::sampled_derivs(rho);
  std::vector<double> w(s.f.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = s.f[i];
    const double z = evaluate_zeta(c, r);
    w[i] = (s.fxx[i] * s.fxx[i] + z * std::pow(s.fx[i], 4)) * c.mu(r) * c.kappa(r) / r;
  }
  return integrate(rho.grid(), w);
}

// Form before integration by parts: int (mu rho_x / rho)_x (kappa rho_xx + kappa' rho_x^2 / 2).
inline double dhat_pre_ibp(const ConstitutiveSet& c, const FlowProfile& rho) {
  if (c.capillarity.is_zero()) throw DomainError("D-hat needs nonzero capillarity");
  const auto& g = rho.grid();
  const int n = g.n(), G = 3;
  const auto f = rho.values();
  const auto pad = g.is_torus() ? padded(g, f, 0.0, 0.0, G) : padded(g, f, g.rho_star(), g.rho_star(), G);
  const double dx = g.dx();
  auto A = [&](int j) {
    const double r = pad[j];
    return c.mu(r) * (pad[j + 1] - pad[j - 1]) / (2.0 * dx) / r;
  };
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int j = i + G;
    const double r = pad[j];
    const double rx = (pad[j + 1] - pad[j - 1]) / (2.0 * dx);
    const double rxx = (pad[j + 1] - 2.0 * r + pad[j - 1]) / (dx * dx);
    const double Ax = (A(j + 1) - A(j - 1)) / (2.0 * dx);
    sum += Ax * (c.kappa(r) * rxx + 0.5 * c.capillarity.d1(r) * rx * rx);
  }
  return sum * dx;
}

// Sum-of-squares form int (mu kappa / rho) F^{-1} |(sqrt(F) rho_x)_x|^2 with F = rho^s, expanded as
// int (mu kappa / rho) (rho_xx + (s / 2) rho_x^2 / rho)^2.
inline double dhat_sos(const ConstitutiveSet& c, const FlowProfile& rho, double s) {
  if (c.capillarity.is_zero()) throw DomainError("D-hat needs nonzero capillarity");
  const auto d = detail::sampled_derivs(rho);
  std::vector<double> w(d.f.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = d.f[i];
    const double v = d.fxx[i] + 0.5 * s * d.fx[i] * d.fx[i] / r;
    w[i] = c.mu(r) * c.kappa(r) / r * v * v;
  }
  return integrate(rho.grid(), w);
}

struct SosForm {
  double s = 0.0;  // (2/3)(alpha + beta - 2)
  bool defined = false;
  double discriminant = 0.0;  // (alpha + beta - 2)^2 - 9 K
  double root_minus = NAN, root_plus = NAN;
};

// F = rho^s turns D-hat into a sum of squares plus (discriminant / 9) int rho^(a+b-3) rho_x^4;
// the remainder vanishes exactly at the two roots.
inline SosForm sos_form(double alpha, double beta) {
  SosForm r;
  const double L = alpha + beta - 2.0;
  const double K = (beta * (beta - 1.0) + 2.0 * (alpha - 1.0) * (alpha - 2.0)) / 6.0;
  r.s = 2.0 * L / 3.0;
  r.discriminant = L * L - 9.0 * K;
  r.defined = check_sc_powerlaw(alpha, beta).verdict("sc") == Verdict::holds;
  if (r.discriminant >= 0.0) {
    const double q = std::sqrt(r.discriminant);
    r.root_minus = 2.0 * (L - q) / 3.0;
    r.root_plus = 2.0 * (L + q) / 3.0;
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Adversarial search over positive profiles for R = D-hat / int (rho_xx^2 + rho_x^4/rho^2) mu kappa/rho.

namespace detail {

inline double ratio_from_logs(double lA, double lB, double K) {
  if (lA == -INFINITY && lB == -INFINITY) return INFINITY;
  if (lB <= lA) {
    const double r = std::exp(lB - lA);
    return (1.0 - K * r) / (1.0 + r);
  }
  const double r = std::exp(lA - lB);
  return (r - K) / (r + 1.0);
}

// exp(trig polynomial) on the unit torus, trapezoid rule (spectrally accurate).
class TrigObjective {
 public:
  TrigObjective(PowerDhat pd, int modes, int points, double amplitude)
      : pd_(pd), m_(modes), n_(points), amp_(amplitude), c_(modes * points), s_(modes * points) {
    for (int k = 1; k <= m_; ++k)
      for (int j = 0; j < n_; ++j) {
        const double t = 2.0 * std::numbers::pi * k * j / n_;
        c_[(k - 1) * n_ + j] = std::cos(t);
        s_[(k - 1) * n_ + j] = std::sin(t);
      }
  }

  std::vector<double> project(std::vector<double> x) const {
    double norm = 0.0;
    for (double v : x) norm += std::fabs(v);
    if (norm > amp_)
      for (double& v : x) v *= amp_ / norm;
    return x;
  }

  double operator()(const std::vector<double>& raw) const {
    const auto x = project(raw);
    double A = 0.0, B = 0.0;
    for (int j = 0; j < n_; ++j) {
      double g = 0.0, gx = 0.0, gxx = 0.0;
      for (int k = 1; k <= m_; ++k) {
        const double w = 2.0 * std::numbers::pi * k;
        const double c = c_[(k - 1) * n_ + j], s = s_[(k - 1) * n_ + j];
        const double a = x[2 * (k - 1)], b = x[2 * (k - 1) + 1];
        const double e = a * c + b * s;
        g += e;
        gx += w * (b * c - a * s);
        gxx -= w * w * e;
      }
      const double W = std::exp(pd_.b * g);
      const double h = gxx + gx * gx;
      A += W * h * h;
      B += W * gx * gx * gx * gx;
    }
    if (A + B == 0.0) return INFINITY;
    return (A - pd_.K * B) / (A + B);
  }

  int modes() const { return m_; }

 private:
  PowerDhat pd_;
  int m_, n_;
  double amp_;
  std::vector<double> c_, s_;
};

// rho = (eps + sin^2(pi x))^(p/2): a cusp (p > 0) or spike (p < 0) of width sqrt(eps).
// Parameters (p, log10 eps).
class CuspObjective {
 public:
  static constexpr double kPMax = 20.0, kLogMin = -280.0, kLogMax = -0.3;

  explicit CuspObjective(PowerDhat pd) : pd_(pd), rule_(quad::cached_jacobi_rule(20, 0.0, 0.0)) {}

  static std::pair<double, double> clamp(const std::vector<double>& x) {
    return {std::clamp(x[0], -kPMax, kPMax), std::clamp(x[1], kLogMin, kLogMax)};
  }

  double operator()(const std::vector<double>& x) const {
    const auto [p, le] = clamp(x);
    if (std::fabs(p) < 1e-6) return INFINITY;
    const double eps = std::pow(10.0, le);
    const double pi = std::numbers::pi;
    LogSum A, B;
    auto seg = [&](double l, double r) {
      const double half = 0.5 * (r - l);
      for (std::size_t k = 0; k < rule_.nodes.size(); ++k) {
        const double xx = l + half * (1.0 + rule_.nodes[k]);
        const double sn = std::sin(pi * xx);
        const double S = eps + sn * sn;
        const double S1 = pi * std::sin(2.0 * pi * xx), S2 = 2.0 * pi * pi * std::cos(2.0 * pi * xx);
        const double q = S1 / S;
        const double g = 0.5 * p * std::log(S);
        const double gx = 0.5 * p * q;
        const double h = 0.5 * p * S2 / S + (0.25 * p * p - 0.5 * p) * q * q;
        const double base = pd_.b * g;
        const double w = rule_.weights[k] * half;
        A.add(base + 2.0 * log_abs(h), w);
        B.add(base + 4.0 * log_abs(gx), w);
      }
    };
    double l = 0.0;
    double r = 1e-3 * std::sqrt(eps) / pi;
    while (r < 0.25) {
      seg(l, r);
      l = r;
      r *= 2.0;
    }
    seg(l, 0.25);
    seg(0.25, 0.5);
    return ratio_from_logs(A.log_value(), B.log_value(), pd_.K);
  }

  static AnalyticDescriptor descriptor(double p, double log10_eps) {
    const double eps = std::pow(10.0, log10_eps);
    AnalyticDescriptor d;
    d.family = "cusp";
    d.params = {p, log10_eps};
    d.jet = [p, eps](double x) {
      const double pi = std::numbers::pi;
      const double sn = std::sin(pi * x);
      const double S = eps + sn * sn;
      const double q = pi * std::sin(2.0 * pi * x) / S;
      const double S2 = 2.0 * pi * pi * std::cos(2.0 * pi * x);
      const double gx = 0.5 * p * q;
      const double h = 0.5 * p * S2 / S + (0.25 * p * p - 0.5 * p) * q * q;
      return LogJet{0.5 * p * std::log(S), gx, h - gx * gx};
    };
    std::vector<double> pos;
    for (double x = 1e-3 * std::sqrt(eps) / std::numbers::pi; x < 0.25; x *= 2.0) pos.push_back(x);
    pos.push_back(0.25);
    d.breakpoints.push_back(-0.5);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) d.breakpoints.push_back(-*it);
    d.breakpoints.push_back(0.0);
    for (double x : pos) d.breakpoints.push_back(x);
    d.breakpoints.push_back(0.5);
    return d;
  }

 private:
  PowerDhat pd_;
  const quad::Rule& rule_;
};

}  // namespace detail

struct AdversarialOptions {
  int modes = 4;
  int restarts = 4;
  int evals_per_restart = 800;
  double amplitude = 5.0;
  int quad_points = 512;
  bool cusp_family = true;
  int cusp_evals = 120;
  // Values below -certify_tol count as negative certificates and stop the search.
  double certify_tol = 1e-6;
  bool stop_on_certificate = true;
  int threads = 1;
  std::uint64_t seed = 1;
};

enum class SearchStatus { converged, budget_exhausted };

struct AdversarialResult {
  double min_value = INFINITY;
  double trig_min = INFINITY, cusp_min = INFINITY;
  std::string family;
  std::vector<double> params;
  SearchStatus status = SearchStatus::converged;
  int evaluations = 0;
  bool certified_negative = false;

  // Minimizing profile on an n-cell unit torus.
  FlowProfile argmin(int n = 256) const {
    if (family == "cusp")
      return FlowProfile::from_analytic(Grid1D::torus(1.0, n),
                                        detail::CuspObjective::descriptor(params[0], params[1]));
    return trig_profile(params, n);
  }
};

// Minimizes the normalized D-hat over exp(trig) profiles (Nelder-Mead from random and single-mode
// starts) and over the two-parameter cusp family. The status is budget_exhausted when a local
// search hit its evaluation cap before converging.
inline AdversarialResult adversarial_min(const ConstitutiveSet& c, const AdversarialOptions& opt = {}) {
  const auto pd = power_dhat(c);
  AdversarialResult res;
  const double target = opt.stop_on_certificate ? -opt.certify_tol : -INFINITY;
  auto take = [&](double v, const std::string& fam, std::vector<double> x) {
    if (v < res.min_value) {
      res.min_value = v;
      res.family = fam;
      res.params = std::move(x);
    }
  };

  if (opt.cusp_family) {
    detail::CuspObjective cusp(pd);
    std::vector<std::pair<double, std::vector<double>>> seeds;
    for (double p : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0, 12.0})
      for (double sgn : {1.0, -1.0})
        for (double le : {-2.0, -10.0, -40.0, -100.0, -200.0}) {
          std::vector<double> x{sgn * p, le};
          seeds.emplace_back(cusp(x), x);
          ++res.evaluations;
        }
    std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < 3 && k < seeds.size(); ++k) {
      res.cusp_min = std::min(res.cusp_min, seeds[k].first);
      if (seeds[k].first < target) break;
      NelderMeadOptions no;
      no.max_evals = opt.cusp_evals;
      no.target = target;
      no.f_tol = 1e-10;
      const auto r = nelder_mead(cusp, seeds[k].second, {0.3 * std::max(1.0, std::fabs(seeds[k].second[0])), 20.0}, no);
      res.evaluations += r.evaluations;
      if (r.f < res.cusp_min) {
        res.cusp_min = r.f;
        const auto [p, le] = detail::CuspObjective::clamp(r.x);
        seeds[k].second = {p, le};
        seeds[k].first = r.f;
      }
    }
    const auto best = std::min_element(seeds.begin(), seeds.end(),
                                       [](const auto& a, const auto& b) { return a.first < b.first; });
    take(best->first, "cusp", best->second);
    if (res.min_value < target) {
      res.certified_negative = true;
      return res;
    }
  }

  detail::TrigObjective trig(pd, opt.modes, opt.quad_points, opt.amplitude);
  const int dim = 2 * opt.modes;
  std::vector<NelderMeadResult> runs(opt.restarts);
  parallel_for(runs.size(), opt.threads, [&](std::size_t r) {
    std::mt19937_64 rng(opt.seed * 1000003ULL + r);
    std::vector<double> x0(dim, 0.0);
    if (r == 0) {
      x0[0] = 1.0;
    } else if (r == 1) {
      x0[0] = 0.5 * opt.amplitude;
    } else {
      x0 = random_trig_coefficients(rng, opt.modes, opt.amplitude / dim * 2.0);
    }
    NelderMeadOptions no;
    no.max_evals = opt.evals_per_restart;
    no.target = target;
    runs[r] = nelder_mead(trig, x0, std::vector<double>(dim, 0.5), no);
  });
  for (auto& r : runs) {
    res.evaluations += r.evaluations;
    if (!r.converged && !(r.f < target)) res.status = SearchStatus::budget_exhausted;
    if (r.f < res.trig_min) {
      res.trig_min = r.f;
      r.x = trig.project(r.x);
      if (r.f < res.min_value) take(r.f, "trig", r.x);
    }
  }
  if (res.family == "trig") {
    // Re-check the winner at double resolution.
    detail::TrigObjective fine(pd, opt.modes, 2 * opt.quad_points, opt.amplitude);
    const double v = fine(res.params);
    res.trig_min = res.min_value = v;
  }
  res.certified_negative = res.min_value < -opt.certify_tol;
  return res;
}

struct ScanPoint {
  double alpha = 0.0, beta = 0.0;
  double min_value = 0.0;
  Verdict verdict = Verdict::undecidable;   // from the search
  Verdict closed_form = Verdict::undecidable;
  double margin = 0.0;  // distance to the nearest boundary line, signed positive inside
  std::string family;
  SearchStatus status = SearchStatus::converged;
};

inline double sc_margin(double alpha, double beta) {
  const double up = (2.0 * alpha - 1.0 - beta) / std::sqrt(5.0);
  const double lo = (beta - 2.0 * alpha + 4.0) / std::sqrt(5.0);
  return std::min(up, lo);
}

// Runs adversarial_min over a rectangular (alpha, beta) grid, in parallel over grid points.
inline std::vector<ScanPoint> sc_scan(std::span<const double> alphas, std::span<const double> betas,
                                      AdversarialOptions opt, int threads) {
  std::vector<ScanPoint> out(alphas.size() * betas.size());
  opt.threads = 1;
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const double a = alphas[k / betas.size()], b = betas[k % betas.size()];
    ConstitutiveSet c;
    c.viscosity = PowerLaw(1.0, a);
    c.capillarity = PowerLaw(1.0, b);
    AdversarialOptions o = opt;
    o.seed = opt.seed + k;
    const auto r = adversarial_min(c, o);
    ScanPoint& p = out[k];
    p.alpha = a;
    p.beta = b;
    p.min_value = r.min_value;
    p.verdict = r.certified_negative ? Verdict::fails : Verdict::holds;
    p.closed_form = check_sc_powerlaw(a, b).verdict("sc");
    p.margin = sc_margin(a, b);
    p.family = r.family;
    p.status = r.status;
  });
  return out;
}

}  // namespace nsklab
