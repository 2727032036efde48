#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nsklab/constitutive.hpp"
#include "nsklab/errors.hpp"
#include "nsklab/quadrature.hpp"

namespace nsklab {

struct GasConstants {
  double gamma = 2.0;
  double theta = 0.5;
  double lambda = 0.5;
  double p0 = 0.125;

  static GasConstants from_gamma(double gamma) {
    if (!(gamma > 1.0) || gamma > 3.0) throw DomainError("entropy kernels need gamma in (1, 3]");
    GasConstants g;
    g.gamma = gamma;
    g.theta = 0.5 * (gamma - 1.0);
    g.lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
    g.p0 = (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma);
    return g;
  }

  // int_{-1}^{1} (1 - s^2)^lambda ds
  double c_lambda() const {
    return std::sqrt(M_PI) * std::exp(std::lgamma(lambda + 1.0) - std::lgamma(lambda + 1.5));
  }

  double sound_speed(double rho) const { return std::sqrt(p0 * gamma) * std::pow(rho, theta); }

  // Polytropic pressure p0 rho^gamma with this normalization.
  PowerLaw pressure() const { return PowerLaw(p0, exponent_from_double(gamma)); }
};

// (rho^(2 theta) - (v - u)^2)_+^lambda
inline double eval_chi(const GasConstants& g, double rho, double u, double v) {
  if (rho < 0.0) throw DomainError("chi needs rho >= 0");
  if (rho == 0.0) return 0.0;
  const double r2 = std::pow(rho, 2.0 * g.theta);
  const double d = r2 - (v - u) * (v - u);
  if (d <= 0.0) return 0.0;
  return g.lambda == 0.0 ? 1.0 : std::pow(d, g.lambda);
}

struct EntropySpec {
  enum class Kind { compact, cubic_signed, abs_power, signed_power, monomial };

  Kind kind = Kind::cubic_signed;
  double center = 0.0;  // compact
  double width = 1.0;   // compact
  double a = 1.0;       // abs_power, signed_power
  int degree = 0;       // monomial
  double scale = 1.0;

  static EntropySpec compact(double center, double width) {
    if (!(width > 0.0)) throw DomainError("compact entropy needs width > 0");
    EntropySpec s;
    s.kind = Kind::compact;
    s.center = center;
    s.width = width;
    return s;
  }
  static EntropySpec cubic_signed() { return EntropySpec{}; }
  static EntropySpec abs_power(double a) { return power_kind(Kind::abs_power, a); }
  static EntropySpec signed_power(double a) { return power_kind(Kind::signed_power, a); }
  static EntropySpec monomial(int degree, double scale = 1.0) {
    if (degree < 0 || degree > 2) throw DomainError("monomial degree must be 0, 1 or 2");
    EntropySpec s;
    s.kind = Kind::monomial;
    s.degree = degree;
    s.scale = scale;
    return s;
  }

  std::string name() const {
    switch (kind) {
      case Kind::compact: return "compact";
      case Kind::cubic_signed: return "cubic_signed";
      case Kind::abs_power: return "abs_power";
      case Kind::signed_power: return "signed_power";
      default: return "monomial";
    }
  }

  // psi^(k)(v) for k = 0, 1, 2, excluding point masses.
  double psi(int k, double v) const {
    double r = 0.0;
    switch (kind) {
      case Kind::compact: {
        const double z = (v - center) / width;
        if (std::fabs(z) >= 1.0) return 0.0;
        const double q = 1.0 - z * z;
        const double f = std::exp(1.0 - 1.0 / q);
        if (k == 0) r = f;
        else if (k == 1) r = f * (-2.0 * z / (q * q)) / width;
        else {
          const double p1 = -2.0 * z / (q * q);
          const double p2 = -2.0 / (q * q) - 8.0 * z * z / (q * q * q);
          r = f * (p1 * p1 + p2) / (width * width);
        }
        break;
      }
      case Kind::cubic_signed:
        r = k == 0 ? v * std::fabs(v) : k == 1 ? 2.0 * std::fabs(v) : (v > 0 ? 2.0 : v < 0 ? -2.0 : 0.0);
        break;
      case Kind::abs_power: {
        const double av = std::fabs(v), sg = v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0;
        if (k == 0) r = std::pow(av, a + 1.0);
        else if (k == 1) r = (a + 1.0) * std::pow(av, a) * sg;
        else r = (a == 0.0 || av == 0.0) ? 0.0 : (a + 1.0) * a * std::pow(av, a - 1.0);
        break;
      }
      case Kind::signed_power: {
        const double av = std::fabs(v), sg = v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0;
        if (k == 0) r = v * std::pow(av, a);
        else if (k == 1) r = (a + 1.0) * std::pow(av, a);
        else r = (a == 0.0 || av == 0.0) ? 0.0 : (a + 1.0) * a * std::pow(av, a - 1.0) * sg;
        break;
      }
      case Kind::monomial:
        if (k > degree) return 0.0;
        r = degree == 0 ? 1.0 : degree == 1 ? (k == 0 ? v : 1.0) : (k == 0 ? v * v : k == 1 ? 2.0 * v : 2.0);
        break;
    }
    return scale * r;
  }

  struct Breakpoint {
    double v;
    std::array<double, 3> exponent;  // local power behaviour of psi^(k) at v
    double jump_d1;                  // jump of psi' (point mass of psi'')
  };

  std::vector<Breakpoint> breakpoints() const {
    switch (kind) {
      case Kind::compact:
        return {{center - width, {0, 0, 0}, 0.0}, {center + width, {0, 0, 0}, 0.0}};
      case Kind::cubic_signed:
        return {{0.0, {2, 1, 0}, 0.0}};
      case Kind::abs_power:
        return {{0.0, {a + 1.0, a, a == 0.0 ? 0.0 : a - 1.0}, a == 0.0 ? 2.0 * scale : 0.0}};
      case Kind::signed_power:
        if (a == 0.0) return {};
        return {{0.0, {a + 1.0, a, a - 1.0}, 0.0}};
      default:
        return {};
    }
  }

 private:
  static EntropySpec power_kind(Kind k, double a) {
    if (a < 0.0 || a > 1.0) throw DomainError("power entropy needs a in [0, 1]");
    EntropySpec s;
    s.kind = k;
    s.a = a;
    return s;
  }
};

struct EntropyValues {
  double eta = 0.0;
  double q = 0.0;
  double eta_m = 0.0;
  double eta_mu = 0.0;
  double eta_mrho = 0.0;
};

// Weak entropy pair generated by psi. With v = u + rho^theta s and w(s) = (1 - s^2)^lambda:
//   eta = rho int w psi,  q = rho int w (u + theta rho^theta s) psi,
//   eta_m = int w psi',  eta_mu = int w psi'',  eta_mrho = theta rho^(theta-1) int w s psi''.
class EntropyPair {
 public:
  EntropyPair(GasConstants g, EntropySpec spec) : g_(g), spec_(spec), bps_(spec.breakpoints()) {}

  const GasConstants& gas() const { return g_; }
  const EntropySpec& spec() const { return spec_; }

  double eta(double rho, double u) const {
    check(rho);
    return rho == 0.0 ? 0.0 : rho * moment(rho, u, 0, 1.0, 0.0);
  }
  double q(double rho, double u) const {
    check(rho);
    if (rho == 0.0) return 0.0;
    return rho * moment(rho, u, 0, u, g_.theta * std::pow(rho, g_.theta));
  }
  double eta_m(double rho, double u) const {
    check(rho);
    if (rho == 0.0) return g_.c_lambda() * spec_.psi(1, u);
    return moment(rho, u, 1, 1.0, 0.0);
  }
  double eta_mu(double rho, double u) const {
    check(rho);
    if (rho == 0.0) throw DomainError("eta_mu evaluated at vacuum");
    return moment(rho, u, 2, 1.0, 0.0);
  }
  double eta_mrho(double rho, double u) const {
    check(rho);
    if (rho == 0.0) throw DomainError("eta_mrho evaluated at vacuum");
    return g_.theta * std::pow(rho, g_.theta - 1.0) * moment(rho, u, 2, 0.0, 1.0);
  }
  EntropyValues evaluate(double rho, double u) const {
    if (rho == 0.0) return {0.0, 0.0, eta_m(0.0, u), 0.0, 0.0};
    return {eta(rho, u), q(rho, u), eta_m(rho, u), eta_mu(rho, u), eta_mrho(rho, u)};
  }

  // int_{-1}^{1} w(s) (c0 + c1 s) psi^(k)(u + rho^theta s) ds, including point masses of psi''.
  double moment(double rho, double u, int k, double c0, double c1) const {
    const double rt = std::pow(rho, g_.theta);
    const double lam = g_.lambda;
    struct End {
      double s;
      double exponent;
      double v;  // psi argument at s, exact at breakpoints
    };
    double left_extra = 0.0, right_extra = 0.0;
    double left_v = u - rt, right_v = u + rt;
    std::vector<End> interior;
    double delta = 0.0;
    for (const auto& b : bps_) {
      const double sb = (b.v - u) / rt;
      if (!(std::fabs(sb) < 1.0 + 1e-13)) continue;
      if (k == 2 && b.jump_d1 != 0.0 && std::fabs(sb) < 1.0)
        delta += b.jump_d1 * std::pow(1.0 - sb * sb, lam) * (c0 + c1 * sb) / rt;
      const double e = b.exponent[k];
      if (sb <= -1.0 + 1e-13) {
        left_extra += e;
        left_v = b.v;
      } else if (sb >= 1.0 - 1e-13) {
        right_extra += e;
        right_v = b.v;
      } else {
        interior.push_back({sb, e, b.v});
      }
    }
    std::sort(interior.begin(), interior.end(), [](const End& x, const End& y) { return x.s < y.s; });
    std::vector<End> ends{{-1.0, lam + left_extra, left_v}};
    ends.insert(ends.end(), interior.begin(), interior.end());
    ends.push_back({1.0, lam + right_extra, right_v});

    auto segment_f = [&](const End& lo, const End& hi) {
      const double mid = 0.5 * (lo.s + hi.s);
      return [&, mid](double s) {
        const double w = lam == 0.0 ? 1.0 : std::pow((1.0 - s) * (1.0 + s), lam);
        const double v = s < mid ? lo.v + rt * (s - lo.s) : hi.v - rt * (hi.s - s);
        return w * (c0 + c1 * s) * spec_.psi(k, v);
      };
    };
    // absolute tolerance from a coarse pass over |f|
    double scale = 0.0;
    for (std::size_t j = 0; j + 1 < ends.size(); ++j) {
      const auto f = segment_f(ends[j], ends[j + 1]);
      auto fabs_f = [&](double s) { return std::fabs(f(s)); };
      quad::JacobiAdaptive coarse(INFINITY, 0);
      scale += coarse.integrate(fabs_f, ends[j].s, ends[j + 1].s, ends[j + 1].exponent, ends[j].exponent);
    }
    double total = 0.0, err = 0.0;
    for (std::size_t j = 0; j + 1 < ends.size(); ++j) {
      if (!(ends[j + 1].s > ends[j].s)) continue;
      const auto f = segment_f(ends[j], ends[j + 1]);
      quad::JacobiAdaptive ad(1e-12 * scale + std::numeric_limits<double>::min());
      total += ad.integrate(f, ends[j].s, ends[j + 1].s, ends[j + 1].exponent, ends[j].exponent);
      err += ad.error_estimate();
    }
    if (err > 1e-9 * std::max(scale, std::fabs(total)) && err > 1e-300)
      throw QuadratureError("entropy quadrature did not reach 1e-9 relative accuracy");
    return total + delta;
  }

 private:
  static void check(double rho) {
    if (rho < 0.0 || !std::isfinite(rho)) throw DomainError("entropy pair needs rho >= 0");
  }

  GasConstants g_;
  EntropySpec spec_;
  std::vector<EntropySpec::Breakpoint> bps_;
};

inline EntropyPair build_pair(const GasConstants& g, const EntropySpec& spec) {
  return EntropyPair(g, spec);
}

struct SampleSet {
  std::vector<double> rho;
  std::vector<double> u;     // velocities, or multiples of rho^theta when scaled
  bool scaled = true;

  // rho log-spaced on [1e-3, 1e3], u / rho^theta on [-10, 10]
  static SampleSet standard(int n_rho = 25, int n_u = 41) {
    SampleSet s;
    for (int i = 0; i < n_rho; ++i) s.rho.push_back(std::pow(10.0, -3.0 + 6.0 * i / (n_rho - 1)));
    for (int j = 0; j < n_u; ++j) s.u.push_back(-10.0 + 20.0 * j / (n_u - 1));
    return s;
  }
};

struct BoundCheck {
  std::string name;
  bool lower = false;  // lower bound: constant is an infimum that must be > 0
  double constant = 0.0;
  bool holds = false;
  double worst_rho = 0.0;
  double worst_u = 0.0;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
  }
  const BoundCheck& at(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw DomainError("no bound '" + name + "'");
  }
};

namespace detail {

class BoundAccumulator {
 public:
  BoundAccumulator(std::string name, bool lower) {
    c_.name = std::move(name);
    c_.lower = lower;
    c_.constant = lower ? INFINITY : 0.0;
  }
  void add(double value, double bound, double rho, double u) {
    if (bound == 0.0) {
      if (value != 0.0 && !c_.lower) c_.constant = INFINITY;
      return;
    }
    const double r = c_.lower ? value / bound : std::fabs(value) / bound;
    if (!std::isfinite(r)) {
      c_.constant = c_.lower ? -INFINITY : INFINITY;
      return;
    }
    if (c_.lower ? r < c_.constant : r > c_.constant) {
      c_.constant = r;
      c_.worst_rho = rho;
      c_.worst_u = u;
    }
  }
  BoundCheck finish() {
    c_.holds = c_.lower ? (c_.constant > 0.0 && std::isfinite(c_.constant)) : std::isfinite(c_.constant);
    return c_;
  }

 private:
  BoundCheck c_;
};

template <class F>
void sweep(const GasConstants& g, const SampleSet& s, F&& f) {
  for (double rho : s.rho)
    for (double uu : s.u) f(rho, s.scaled ? uu * std::pow(rho, g.theta) : uu);
}

inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace detail

// Bounds for psi = v|v|: q >~ rho|u|^3 + rho^(gamma+theta), |eta| <~ rho u^2 + rho^gamma,
// |eta_m| <~ |u| + rho^theta, |eta_mrho| <~ rho^(theta-1), |eta_mu| <~ 1.
inline BoundReport check_bounds_cubic(const GasConstants& g, const EntropyPair& p,
                                      const SampleSet& s = SampleSet::standard()) {
  detail::BoundAccumulator q("q_lower", true), eta("eta", false), em("eta_m", false),
      emr("eta_mrho", false), emu("eta_mu", false);
  const double th = g.theta, ga = g.gamma;
  detail::sweep(g, s, [&](double rho, double u) {
    const auto v = p.evaluate(rho, u);
    const double au = std::fabs(u);
    q.add(v.q, rho * au * au * au + std::pow(rho, ga + th), rho, u);
    eta.add(v.eta, rho * u * u + std::pow(rho, ga), rho, u);
    em.add(v.eta_m, au + std::pow(rho, th), rho, u);
    emr.add(v.eta_mrho, std::pow(rho, th - 1.0), rho, u);
    emu.add(v.eta_mu, 1.0, rho, u);
  });
  return {{q.finish(), eta.finish(), em.finish(), emr.finish(), emu.finish()}};
}

// The ten bound families for psi = |v|^(a+1) (eta^a) and psi = v|v|^a (tilde eta^a).
inline BoundReport check_bounds_power(const GasConstants& g, double a, const EntropyPair& abs_pair,
                                      const EntropyPair& signed_pair,
                                      const SampleSet& s = SampleSet::standard()) {
  if (a < 0.0 || a > 1.0) throw DomainError("check_bounds_power needs a in [0, 1]");
  detail::BoundAccumulator eta("eta", false), etat("etat", false), q("q", false),
      qt("qt_lower", true), em("eta_m", false), emt("etat_m", false), emu("eta_mu_lower", true),
      emut("etat_mu", false), emr("eta_mrho", false), emrt("etat_mrho", false);
  const double th = g.theta, ga = g.gamma;
  detail::sweep(g, s, [&](double rho, double u) {
    const auto v = abs_pair.evaluate(rho, u);
    const auto w = signed_pair.evaluate(rho, u);
    const double au = std::fabs(u), rt = std::pow(rho, th);
    const double b_eta = std::pow(rho, (a + 1.0) * th + 1.0) + rho * std::pow(au, a + 1.0);
    const double b_q = std::pow(rho, ga + a * th) + rho * std::pow(au, 2.0 + a);
    const double b_m = std::pow(rho, a * th) + std::pow(au, a);
    const double b_mu = std::pow(rho, (a - 1.0) * th) * std::pow(detail::bracket(u / rt), a - 1.0);
    const double b_mr = std::pow(rho, a * th - 1.0);
    eta.add(v.eta, b_eta, rho, u);
    etat.add(w.eta, b_eta, rho, u);
    q.add(v.q, b_q, rho, u);
    qt.add(w.q, b_q, rho, u);
    em.add(v.eta_m, b_m, rho, u);
    emt.add(w.eta_m, b_m, rho, u);
    emu.add(v.eta_mu, b_mu, rho, u);
    emut.add(w.eta_mu, b_mu, rho, u);
    emr.add(v.eta_mrho, b_mr, rho, u);
    emrt.add(w.eta_mrho, b_mr, rho, u);
  });
  return {{eta.finish(), etat.finish(), q.finish(), qt.finish(), em.finish(), emt.finish(),
           emu.finish(), emut.finish(), emr.finish(), emrt.finish()}};
}

// Bounds for smooth compactly supported psi, with <rho> = sqrt(1 + rho^2).
inline BoundReport check_boundpsi(const GasConstants& g, const EntropyPair& p,
                                  const SampleSet& s = SampleSet::standard()) {
  if (p.spec().kind != EntropySpec::Kind::compact) throw DomainError("check_boundpsi needs a compact psi");
  detail::BoundAccumulator eta("eta", false), em("eta_m", false), emu("eta_mu", false),
      emr("eta_mrho", false), q("q", false);
  const double th = g.theta;
  detail::sweep(g, s, [&](double rho, double u) {
    const auto v = p.evaluate(rho, u);
    const double br = std::pow(detail::bracket(rho), -th);
    eta.add(v.eta, rho * br, rho, u);
    em.add(v.eta_m, br, rho, u);
    emu.add(v.eta_mu, br, rho, u);
    emr.add(v.eta_mrho, std::pow(rho, th - 1.0) * br, rho, u);
    q.add(v.q, rho, rho, u);
  });
  return {{eta.finish(), em.finish(), emu.finish(), emr.finish(), q.finish()}};
}

}  // namespace nsklab
