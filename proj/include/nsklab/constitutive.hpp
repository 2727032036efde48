#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nsklab/errors.hpp"
#include "nsklab/rational.hpp"

namespace nsklab {

// c * rho^e with an exact rational exponent.
struct PowerLaw {
  double coefficient = 1.0;
  Exponent exponent{0};

  PowerLaw() = default;
  PowerLaw(double c, Exponent e) : coefficient(c), exponent(e) {}
  PowerLaw(double c, double e) : coefficient(c), exponent(exponent_from_double(e)) {}

  double exp() const { return to_double(exponent); }

  double operator()(double rho) const { return eval(coefficient, exp(), rho); }
  double d1(double rho) const {
    const double e = exp();
    return e == 0.0 ? 0.0 : eval(coefficient * e, e - 1.0, rho);
  }
  double d2(double rho) const {
    const double e = exp();
    const double k = e * (e - 1.0);
    return k == 0.0 ? 0.0 : eval(coefficient * k, e - 2.0, rho);
  }

  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;

 private:
  static double eval(double c, double e, double rho) {
    if (rho < 0.0) throw DomainError("power law evaluated at negative density");
    if (rho == 0.0) {
      if (e > 0.0) return 0.0;
      if (e == 0.0) return c;
      throw DomainError("power law with negative exponent evaluated at rho = 0");
    }
    return e == 0.0 ? c : c * std::pow(rho, e);
  }
};

struct ZeroLaw {
  friend bool operator==(const ZeroLaw&, const ZeroLaw&) = default;
};

// Log-log piecewise linear table, extended by the end slopes.
class TabulatedLaw {
 public:
  TabulatedLaw(std::vector<double> rho, std::vector<double> value)
      : rho_(std::move(rho)), value_(std::move(value)) {
    if (rho_.size() < 2 || rho_.size() != value_.size())
      throw DomainError("tabulated law needs >= 2 matching (rho, value) pairs");
    for (std::size_t k = 0; k < rho_.size(); ++k) {
      if (!(rho_[k] > 0.0) || !(value_[k] > 0.0))
        throw DomainError("tabulated law entries must be positive");
      if (k > 0 && !(rho_[k] > rho_[k - 1]))
        throw DomainError("tabulated law densities must increase");
    }
  }

  double operator()(double rho) const {
    if (rho <= 0.0) return rho == 0.0 && slope(0) > 0.0 ? 0.0 : edge_error();
    const auto [k, s] = locate(rho);
    return value_[k] * std::pow(rho / rho_[k], s);
  }
  double d1(double rho) const {
    if (rho <= 0.0) edge_error();
    const auto [k, s] = locate(rho);
    return (*this)(rho) * s / rho;
  }
  double d2(double rho) const {
    if (rho <= 0.0) edge_error();
    const auto [k, s] = locate(rho);
    return (*this)(rho) * s * (s - 1.0) / (rho * rho);
  }

  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& values() const { return value_; }
  friend bool operator==(const TabulatedLaw&, const TabulatedLaw&) = default;

 private:
  double slope(std::size_t k) const {
    return std::log(value_[k + 1] / value_[k]) / std::log(rho_[k + 1] / rho_[k]);
  }
  std::pair<std::size_t, double> locate(double rho) const {
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    std::size_t k = it == rho_.begin() ? 0 : static_cast<std::size_t>(it - rho_.begin()) - 1;
    k = std::min(k, rho_.size() - 2);
    return {k, slope(k)};
  }
  [[noreturn]] static double edge_error() {
    throw DomainError("tabulated law evaluated at nonpositive density");
  }

  std::vector<double> rho_, value_;
};

class Law {
 public:
  Law() = default;
  Law(ZeroLaw z) : v_(z) {}
  Law(PowerLaw p) : v_(p) {}
  Law(TabulatedLaw t) : v_(std::move(t)) {}

  static Law zero() { return Law(ZeroLaw{}); }

  bool is_zero() const { return std::holds_alternative<ZeroLaw>(v_); }
  bool is_power() const { return std::holds_alternative<PowerLaw>(v_); }
  bool is_tabulated() const { return std::holds_alternative<TabulatedLaw>(v_); }
  const PowerLaw& power() const {
    if (!is_power()) throw DomainError("law is not a power law");
    return std::get<PowerLaw>(v_);
  }

  double operator()(double rho) const { return visit([rho](const auto& l) { return l(rho); }); }
  double d1(double rho) const { return visit([rho](const auto& l) { return l.d1(rho); }); }
  double d2(double rho) const { return visit([rho](const auto& l) { return l.d2(rho); }); }

  // True when evaluation at rho = 0 is singular.
  bool singular_at_zero() const {
    if (const auto* p = std::get_if<PowerLaw>(&v_)) return p->exp() < 0.0;
    if (const auto* t = std::get_if<TabulatedLaw>(&v_))
      return std::log(t->values()[1] / t->values()[0]) < 0.0;
    return false;
  }

  std::string describe() const {
    if (is_zero()) return "zero";
    if (is_power()) {
      const auto& p = power();
      return std::to_string(p.coefficient) + "*rho^(" + to_string(p.exponent) + ")";
    }
    return "tabulated";
  }

  friend bool operator==(const Law&, const Law&) = default;

 private:
  template <class F>
  double visit(F&& f) const {
    return std::visit(
        [&](const auto& l) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ZeroLaw>) return 0.0;
          else return f(l);
        },
        v_);
  }

  std::variant<ZeroLaw, PowerLaw, TabulatedLaw> v_{ZeroLaw{}};
};

// c * rho^e with fast paths for common exponents; rho > 0 assumed.
class FastPower {
 public:
  FastPower() = default;
  FastPower(double c, double e) : c_(c), e_(e) {
    if (e == 0.0) kind_ = 0;
    else if (e == 1.0) kind_ = 1;
    else if (e == 2.0) kind_ = 2;
    else if (e == -1.0) kind_ = 3;
    else if (e == 0.5) kind_ = 4;
    else if (e == -2.0) kind_ = 5;
    else if (e == 3.0) kind_ = 6;
    else kind_ = 7;
  }
  double operator()(double r) const {
    switch (kind_) {
      case 0: return c_;
      case 1: return c_ * r;
      case 2: return c_ * r * r;
      case 3: return c_ / r;
      case 4: return c_ * std::sqrt(r);
      case 5: return c_ / (r * r);
      case 6: return c_ * r * r * r;
      default: return c_ * std::pow(r, e_);
    }
  }

 private:
  double c_ = 0.0, e_ = 0.0;
  int kind_ = 0;
};

// Scaled law s * L(rho) and its derivative, with a fast path for power laws.
class LawEval {
 public:
  LawEval(const Law& law, double scale) : law_(&law), scale_(scale) {
    zero_ = law.is_zero() || scale == 0.0;
    if (!zero_ && law.is_power()) {
      const auto& p = law.power();
      fast_ = true;
      v_ = FastPower(scale * p.coefficient, p.exp());
      d_ = p.exp() == 0.0 ? FastPower(0.0, 0.0)
                          : FastPower(scale * p.coefficient * p.exp(), p.exp() - 1.0);
    }
  }
  bool zero() const { return zero_; }
  double operator()(double r) const {
    if (zero_) return 0.0;
    return fast_ ? v_(r) : scale_ * (*law_)(r);
  }
  double d1(double r) const {
    if (zero_) return 0.0;
    return fast_ ? d_(r) : scale_ * law_->d1(r);
  }

 private:
  const Law* law_;
  double scale_;
  bool zero_ = false, fast_ = false;
  FastPower v_, d_;
};

// delta(eps) = coefficient * eps^power
struct DeltaRule {
  double coefficient = 1.0;
  double power = 2.0;
  double operator()(double eps) const { return coefficient * std::pow(eps, power); }
  friend bool operator==(const DeltaRule&, const DeltaRule&) = default;
};

struct ConstitutiveSet {
  PowerLaw pressure{1.0, Exponent(2)};
  Law viscosity = PowerLaw(1.0, Exponent(1));
  Law capillarity = Law::zero();
  double eps = 1.0;
  DeltaRule delta_rule{};

  double gamma() const { return pressure.exp(); }
  double delta() const { return delta_rule(eps); }

  double p(double rho) const { return pressure(rho); }
  double dp(double rho) const { return pressure.d1(rho); }
  double mu(double rho) const { return viscosity(rho); }
  double kappa(double rho) const { return capillarity(rho); }

  double mu_eps(double rho) const { return eps == 0.0 ? 0.0 : eps * viscosity(rho); }
  double dmu_eps(double rho) const { return eps == 0.0 ? 0.0 : eps * viscosity.d1(rho); }
  double kappa_eps(double rho) const {
    const double d = delta();
    return d == 0.0 ? 0.0 : d * capillarity(rho);
  }
  double dkappa_eps(double rho) const {
    const double d = delta();
    return d == 0.0 ? 0.0 : d * capillarity.d1(rho);
  }

  bool power_class() const {
    return viscosity.is_power() && (capillarity.is_power() || capillarity.is_zero());
  }
  double alpha() const { return viscosity.power().exp(); }
  double beta() const { return capillarity.power().exp(); }

  ConstitutiveSet with_eps(double e) const {
    ConstitutiveSet c = *this;
    c.eps = e;
    return c;
  }

  friend bool operator==(const ConstitutiveSet&, const ConstitutiveSet&) = default;
};

// e(rho) with e' = p / rho^2 and e(0) = 0.
inline double internal_energy(const ConstitutiveSet& c, double rho) {
  const double g = c.gamma();
  if (!(g > 1.0)) throw DomainError("internal energy needs gamma > 1");
  if (rho < 0.0) throw DomainError("negative density");
  return c.pressure.coefficient * std::pow(rho, g - 1.0) / (g - 1.0);
}

inline double internal_energy_d1(const ConstitutiveSet& c, double rho) {
  return rho > 0.0 ? c.p(rho) / (rho * rho) : 0.0;
}

// Lagrangian coefficients nu(v) = mu(1/v)/v and lambda(v) = kappa(1/v)/v^5.
inline std::pair<Law, Law> lagrangian_coefficients(const ConstitutiveSet& c) {
  if (!c.power_class()) throw DomainError("lagrangian transform needs power laws");
  const auto& m = c.viscosity.power();
  Law nu = PowerLaw(m.coefficient, -m.exponent - Exponent(1));
  Law lambda = Law::zero();
  if (c.capillarity.is_power()) {
    const auto& k = c.capillarity.power();
    lambda = PowerLaw(k.coefficient, -k.exponent - Exponent(5));
  }
  return {nu, lambda};
}

// Inverse transform: mu(rho) = nu(1/rho)/rho, kappa(rho) = lambda(1/rho)/rho^5.
inline std::pair<Law, Law> eulerian_coefficients(const Law& nu, const Law& lambda) {
  const auto& n = nu.power();
  Law mu = PowerLaw(n.coefficient, -n.exponent - Exponent(1));
  Law kappa = Law::zero();
  if (lambda.is_power()) {
    const auto& l = lambda.power();
    kappa = PowerLaw(l.coefficient, -l.exponent - Exponent(5));
  }
  return {mu, kappa};
}

}  // namespace nsklab
