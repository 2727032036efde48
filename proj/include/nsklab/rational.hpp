#pragma once

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "nsklab/errors.hpp"

namespace nsklab {

using Exponent = boost::rational<std::int64_t>;

inline double to_double(const Exponent& e) {
  return boost::rational_cast<double>(e);
}

// Best rational approximation with denominator <= max_den (continued fractions).
inline Exponent exponent_from_double(double x, std::int64_t max_den = 1000000) {
  if (!std::isfinite(x)) throw DomainError("non-finite exponent");
  const bool neg = x < 0;
  double r = std::fabs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(r);
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = r - fl;
    if (frac < 1e-13 || std::fabs(static_cast<double>(p1) / q1 - std::fabs(x)) < 1e-15 * std::max(1.0, std::fabs(x)))
      break;
    r = 1.0 / frac;
  }
  return Exponent(neg ? -p1 : p1, q1);
}

// Accepts "3", "-1.5", "2/3".
inline Exponent parse_exponent(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const auto num = std::stoll(text.substr(0, slash));
      const auto den = std::stoll(text.substr(slash + 1));
      if (den == 0) throw DomainError("zero denominator in exponent '" + text + "'");
      return Exponent(num, den);
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw DomainError("bad exponent '" + text + "'");
    return exponent_from_double(v);
  } catch (const std::logic_error&) {
    throw DomainError("bad exponent '" + text + "'");
  }
}

inline std::string to_string(const Exponent& e) {
  if (e.denominator() == 1) return std::to_string(e.numerator());
  return std::to_string(e.numerator()) + "/" + std::to_string(e.denominator());
}

}  // namespace nsklab
