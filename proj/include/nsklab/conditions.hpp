#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsklab/constitutive.hpp"

namespace nsklab {

enum class Verdict { holds, fails, undecidable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "undecidable-for-this-class";
  }
}

// The violated inequality together with the point at which it was observed.
// `violated` re-evaluates the inequality from scratch.
struct Witness {
  std::string inequality;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::function<bool()> violated;

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << inequality;
    if (rho) os << " at rho=" << *rho;
    if (alpha) os << " alpha=" << *alpha;
    if (beta) os << " beta=" << *beta;
    return os.str();
  }
};

struct ConditionEntry {
  std::string name;
  Verdict verdict = Verdict::undecidable;
  bool binding = true;
  std::string note;
  std::optional<Witness> witness;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;

  const ConditionEntry& at(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw DomainError("no condition entry '" + name + "'");
  }
  Verdict verdict(const std::string& name) const { return at(name).verdict; }

  // fails if any binding entry fails, else undecidable if any is undecidable.
  Verdict overall() const {
    Verdict v = Verdict::holds;
    for (const auto& e : entries) {
      if (!e.binding) continue;
      if (e.verdict == Verdict::fails) return Verdict::fails;
      if (e.verdict == Verdict::undecidable) v = Verdict::undecidable;
    }
    return v;
  }

  void append(const ConditionReport& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  }
};

namespace detail {

inline ConditionEntry entry(std::string name, bool ok, Witness w, bool binding = true,
                            std::string note = {}) {
  ConditionEntry e{std::move(name), ok ? Verdict::holds : Verdict::fails, binding,
                   std::move(note), std::nullopt};
  if (!ok) e.witness = std::move(w);
  return e;
}

inline ConditionEntry undecidable(std::string name, std::string note, bool binding = true) {
  return ConditionEntry{std::move(name), Verdict::undecidable, binding, std::move(note),
                        std::nullopt};
}

inline constexpr std::array<double, 3> kSampleRho{1e-3, 1.0, 1e3};

}  // namespace detail

inline ConditionReport check_euler_conditions(const ConstitutiveSet& c) {
  const PowerLaw p = c.pressure;
  const double g = p.exp();
  if (!(g > 0.0)) throw DomainError("gamma must be positive");
  ConditionReport r;
  for (double rho : detail::kSampleRho) {
    const std::string at = "@rho=" + std::to_string(rho);
    r.entries.push_back(detail::entry(
        "hyperbolicity" + at, p.d1(rho) > 0.0,
        Witness{"p'(rho) > 0", rho, {}, {}, [p, rho] { return !(p.d1(rho) > 0.0); }}));
    r.entries.push_back(detail::entry(
        "convexity_printed" + at, p.d2(rho) + rho * p.d1(rho) > 0.0,
        Witness{"p''(rho) + rho p'(rho) > 0", rho, {}, {},
                [p, rho] { return !(p.d2(rho) + rho * p.d1(rho) > 0.0); }},
        true, "literal printed expression"));
    r.entries.push_back(detail::entry(
        "convexity_standard" + at, rho * p.d2(rho) + 2.0 * p.d1(rho) > 0.0,
        Witness{"rho p''(rho) + 2 p'(rho) > 0", rho, {}, {},
                [p, rho] { return !(rho * p.d2(rho) + 2.0 * p.d1(rho) > 0.0); }},
        false, "standard isentropic form"));
  }
  const Exponent ge = p.exponent;
  r.entries.push_back(detail::entry(
      "gamma_gt_1", ge > Exponent(1),
      Witness{"gamma > 1", {}, {}, {}, [ge] { return !(ge > Exponent(1)); }}));
  const bool in_range = ge > Exponent(1) && ge <= Exponent(5, 3);
  r.entries.push_back(detail::entry(
      "limit_theorem_range", in_range,
      Witness{"1 < gamma <= 5/3", {}, {}, {},
              [ge] { return !(ge > Exponent(1) && ge <= Exponent(5, 3)); }},
      false, "polytropic range of the vanishing limit"));
  return r;
}

inline ConditionReport check_mild_assumptions(const ConstitutiveSet& c) {
  ConditionReport r;
  const Law mu = c.viscosity, kappa = c.capillarity;

  if (mu.is_power()) {
    const PowerLaw m = mu.power();
    const Exponent a = m.exponent;
    r.entries.push_back(detail::entry(
        "mu_positive", m.coefficient > 0.0,
        Witness{"mu(rho) > 0", 1.0, {}, {}, [m] { return !(m(1.0) > 0.0); }}));
    r.entries.push_back(detail::entry(
        "mu_vanishes_at_0", a > Exponent(0),
        Witness{"mu(0+) = 0 requires alpha > 0", {}, to_double(a), {},
                [a] { return !(a > Exponent(0)); }}));
    r.entries.push_back(detail::entry(
        "mu_liminf_infinity", a >= Exponent(0),
        Witness{"liminf_{rho->inf} mu > 0 requires alpha >= 0", {}, to_double(a), {},
                [a] { return !(a >= Exponent(0)); }},
        true, a > Exponent(0) ? "mu -> infinity as rho -> infinity" : std::string{}));
    r.entries.push_back(ConditionEntry{"rho_dmu_le_mu", Verdict::holds, true,
                                       "ratio rho|mu'|/mu = |alpha|", std::nullopt});
  } else if (mu.is_zero()) {
    r.entries.push_back(detail::entry(
        "mu_positive", false,
        Witness{"mu(rho) > 0", 1.0, {}, {}, [mu] { return !(mu(1.0) > 0.0); }}));
  } else {
    r.entries.push_back(detail::undecidable("mu_positive", "tabulated viscosity"));
    r.entries.push_back(detail::undecidable("mu_vanishes_at_0", "tabulated viscosity"));
    r.entries.push_back(detail::undecidable("mu_liminf_infinity", "tabulated viscosity"));
    r.entries.push_back(detail::undecidable("rho_dmu_le_mu", "tabulated viscosity"));
  }

  if (kappa.is_zero()) {
    r.entries.push_back(ConditionEntry{"kappa_zero_or_positive", Verdict::holds, true,
                                       "kappa identically zero", std::nullopt});
    r.entries.push_back(ConditionEntry{"rho_dkappa_le_kappa", Verdict::holds, true, {},
                                       std::nullopt});
  } else if (kappa.is_power()) {
    const PowerLaw k = kappa.power();
    r.entries.push_back(detail::entry(
        "kappa_zero_or_positive", k.coefficient > 0.0,
        Witness{"kappa(rho) > 0", 1.0, {}, {}, [k] { return !(k(1.0) > 0.0); }}));
    r.entries.push_back(ConditionEntry{"rho_dkappa_le_kappa", Verdict::holds, true,
                                       "ratio rho|kappa'|/kappa = |beta|", std::nullopt});
  } else {
    r.entries.push_back(detail::undecidable("kappa_zero_or_positive", "tabulated capillarity"));
    r.entries.push_back(detail::undecidable("rho_dkappa_le_kappa", "tabulated capillarity"));
  }

  r.entries.push_back(ConditionEntry{"rho_dp_le_p", Verdict::holds, true,
                                     "rho p' = gamma p", std::nullopt});
  return r;
}

// (NC): alpha < 1/2 or beta < -2.
inline ConditionReport check_nc(const ConstitutiveSet& c) {
  ConditionReport r;
  if (!c.power_class()) {
    r.entries.push_back(detail::undecidable("nc", "non power-law class"));
    return r;
  }
  const Exponent a = c.viscosity.power().exponent;
  const bool has_k = c.capillarity.is_power();
  const Exponent b = has_k ? c.capillarity.power().exponent : Exponent(0);
  auto ok = [a, b, has_k] { return a < Exponent(1, 2) || (has_k && b < Exponent(-2)); };
  r.entries.push_back(detail::entry(
      "nc", ok(),
      Witness{"alpha < 1/2 or beta < -2", {}, to_double(a),
              has_k ? std::optional<double>(to_double(b)) : std::nullopt,
              [ok] { return !ok(); }}));
  return r;
}

// Strong coercivity for power laws: 2 alpha - 4 < beta < 2 alpha - 1.
inline ConditionReport check_sc_powerlaw(Exponent alpha, Exponent beta) {
  auto ok = [alpha, beta] {
    return Exponent(2) * alpha - Exponent(4) < beta && beta < Exponent(2) * alpha - Exponent(1);
  };
  ConditionReport r;
  r.entries.push_back(detail::entry(
      "sc", ok(),
      Witness{"2 alpha - 4 < beta < 2 alpha - 1", {}, to_double(alpha), to_double(beta),
              [ok] { return !ok(); }}));
  return r;
}

inline ConditionReport check_sc_powerlaw(double alpha, double beta) {
  return check_sc_powerlaw(exponent_from_double(alpha), exponent_from_double(beta));
}

// beta^2 + (5 - 4 alpha) beta + (4 alpha^2 - 10 alpha + 4); negative exactly inside the cone.
inline Exponent sc_quadratic(Exponent alpha, Exponent beta) {
  return beta * beta + (Exponent(5) - Exponent(4) * alpha) * beta +
         (Exponent(4) * alpha * alpha - Exponent(10) * alpha + Exponent(4));
}

inline ConditionReport check_sc(const ConstitutiveSet& c) {
  if (!c.power_class()) {
    ConditionReport r;
    r.entries.push_back(detail::undecidable("sc", "non power-law class"));
    return r;
  }
  if (c.capillarity.is_zero()) {
    ConditionReport r;
    r.entries.push_back(detail::undecidable("sc", "kappa identically zero"));
    return r;
  }
  return check_sc_powerlaw(c.viscosity.power().exponent, c.capillarity.power().exponent);
}

// (TC): kappa <~ mu^2/rho^3 and delta(eps) <~ eps^2.
inline ConditionReport check_tc(const ConstitutiveSet& c) {
  ConditionReport r;
  if (!c.power_class()) {
    r.entries.push_back(detail::undecidable("tc_global", "non power-law class"));
    r.entries.push_back(detail::undecidable("tc_small_rho", "non power-law class", false));
  } else if (c.capillarity.is_zero()) {
    r.entries.push_back(ConditionEntry{"tc_global", Verdict::holds, true,
                                       "kappa identically zero", std::nullopt});
    r.entries.push_back(ConditionEntry{"tc_small_rho", Verdict::holds, false,
                                       "kappa identically zero", std::nullopt});
  } else {
    const PowerLaw m = c.viscosity.power(), k = c.capillarity.power();
    const Exponent a = m.exponent, b = k.exponent;
    const Exponent excess = b - (Exponent(2) * a - Exponent(3));
    // kappa rho^3 / mu^2 = (k0/m0^2) rho^excess; unbounded unless excess = 0
    auto ratio = [m, k](double rho) { return k(rho) * rho * rho * rho / (m(rho) * m(rho)); };
    const double base = k.coefficient / (m.coefficient * m.coefficient);
    const double rho_w = excess > Exponent(0) ? 1e6 : 1e-6;
    r.entries.push_back(detail::entry(
        "tc_global", excess == Exponent(0),
        Witness{"kappa(rho) rho^3 / mu(rho)^2 bounded for all rho > 0 (beta = 2 alpha - 3)", rho_w,
                to_double(a), to_double(b),
                [ratio, rho_w, base] { return ratio(rho_w) > 1e3 * base; }}));
    const double rho_s = 1e-6;
    r.entries.push_back(detail::entry(
        "tc_small_rho", excess >= Exponent(0),
        Witness{"kappa(rho) rho^3 / mu(rho)^2 bounded as rho -> 0 (beta >= 2 alpha - 3)", rho_s,
                to_double(a), to_double(b),
                [ratio, rho_s, base] { return ratio(rho_s) > 1e3 * base; }},
        false));
  }
  const DeltaRule d = c.delta_rule;
  std::array<double, 3> eps{1e-1, 1e-2, 1e-3};
  bool ok = true;
  double bad = 0.0;
  for (std::size_t i = 1; i < eps.size(); ++i) {
    const double prev = d(eps[i - 1]) / (eps[i - 1] * eps[i - 1]);
    const double cur = d(eps[i]) / (eps[i] * eps[i]);
    if (cur > prev * (1.0 + 1e-12)) {
      ok = false;
      bad = eps[i];
      break;
    }
  }
  r.entries.push_back(detail::entry(
      "delta_le_eps2", ok,
      Witness{"delta(eps)/eps^2 nonincreasing as eps -> 0", {}, {}, {},
              [d, bad] {
                const double e0 = bad * 10.0;
                return d(bad) / (bad * bad) > d(e0) / (e0 * e0) * (1.0 + 1e-12);
              }},
      true, "sampled at eps = 1e-1, 1e-2, 1e-3"));
  return r;
}

// (GR): mu <~ rho^(2/3) and rho kappa' + 5 kappa >= 0.
inline ConditionReport check_gr(const ConstitutiveSet& c) {
  ConditionReport r;
  if (!c.power_class()) {
    r.entries.push_back(detail::undecidable("gr_global", "non power-law class", false));
    r.entries.push_back(detail::undecidable("gr_small_rho", "non power-law class"));
    r.entries.push_back(detail::undecidable("gr_capillarity", "non power-law class"));
    return r;
  }
  const PowerLaw m = c.viscosity.power();
  const Exponent a = m.exponent, two3(2, 3);
  auto ratio = [m](double rho) { return m(rho) / std::cbrt(rho * rho); };
  const double rho_g = a > two3 ? 1e6 : 1e-6;
  r.entries.push_back(detail::entry(
      "gr_global", a == two3,
      Witness{"mu(rho) / rho^(2/3) bounded for all rho > 0 (alpha = 2/3)", rho_g, to_double(a), {},
              [ratio, rho_g, m] { return ratio(rho_g) > 1e3 * m.coefficient; }},
      false));
  r.entries.push_back(detail::entry(
      "gr_small_rho", a >= two3,
      Witness{"mu(rho) / rho^(2/3) bounded as rho -> 0 (alpha >= 2/3)", 1e-6, to_double(a), {},
              [ratio, m] { return ratio(1e-6) > 1e3 * m.coefficient; }}));
  if (c.capillarity.is_zero()) {
    r.entries.push_back(ConditionEntry{"gr_capillarity", Verdict::holds, true,
                                       "kappa identically zero", std::nullopt});
  } else {
    const PowerLaw k = c.capillarity.power();
    r.entries.push_back(detail::entry(
        "gr_capillarity", k.exponent >= Exponent(-5),
        Witness{"rho kappa'(rho) + 5 kappa(rho) >= 0 (beta >= -5)", 1.0, {}, to_double(k.exponent),
                [k] { return 1.0 * k.d1(1.0) + 5.0 * k(1.0) < 0.0; }}));
  }
  return r;
}

// Every condition in one report.
inline ConditionReport check_all(const ConstitutiveSet& c) {
  ConditionReport r = check_euler_conditions(c);
  r.append(check_mild_assumptions(c));
  r.append(check_nc(c));
  r.append(check_sc(c));
  r.append(check_tc(c));
  r.append(check_gr(c));
  return r;
}

}  // namespace nsklab
