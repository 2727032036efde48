#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "nsklab/errors.hpp"

namespace nsklab {

struct FarField {
  double rho = 0.0;
  double u = 0.0;
};

struct Torus {
  double length = 1.0;
};

// rho_star is the renormalization reference. Ghost states default to (rho_star, 0);
// left/right override them for Riemann-type data.
struct Line {
  double x_min = -1.0;
  double x_max = 1.0;
  double rho_star = 0.0;
  std::optional<FarField> left;
  std::optional<FarField> right;
};

class Grid1D {
 public:
  Grid1D(std::variant<Torus, Line> domain, int n_cells) : domain_(std::move(domain)), n_(n_cells) {
    if (n_ < 8) throw ConfigError("grid needs at least 8 cells");
    const double len = is_torus() ? torus().length : line().x_max - line().x_min;
    if (!(len > 0.0)) throw ConfigError("grid extent must be positive");
    if (!is_torus() && line().rho_star < 0.0) throw ConfigError("far-field density must be >= 0");
    dx_ = len / n_;
  }

  static Grid1D torus(double length, int n) { return Grid1D(Torus{length}, n); }
  static Grid1D line(double x_min, double x_max, double rho_star, int n) {
    return Grid1D(Line{x_min, x_max, rho_star, {}, {}}, n);
  }

  int n() const { return n_; }
  double dx() const { return dx_; }
  bool is_torus() const { return std::holds_alternative<Torus>(domain_); }
  const Torus& torus() const { return std::get<Torus>(domain_); }
  const Line& line() const { return std::get<Line>(domain_); }
  const std::variant<Torus, Line>& domain() const { return domain_; }

  double x_min() const { return is_torus() ? 0.0 : line().x_min; }
  double length() const { return n_ * dx_; }
  double x(int i) const { return x_min() + (i + 0.5) * dx_; }
  std::vector<double> centers() const {
    std::vector<double> xs(n_);
    for (int i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
  }

  double rho_star() const { return is_torus() ? 0.0 : line().rho_star; }
  FarField left_state() const {
    if (is_torus()) throw ConfigError("torus has no far field");
    return line().left.value_or(FarField{line().rho_star, 0.0});
  }
  FarField right_state() const {
    if (is_torus()) throw ConfigError("torus has no far field");
    return line().right.value_or(FarField{line().rho_star, 0.0});
  }

  bool same_as(const Grid1D& o) const {
    return n_ == o.n_ && std::fabs(dx_ - o.dx_) <= 1e-14 * dx_ &&
           std::fabs(x_min() - o.x_min()) <= 1e-14 * (1.0 + std::fabs(x_min())) &&
           is_torus() == o.is_torus();
  }

 private:
  std::variant<Torus, Line> domain_;
  int n_;
  double dx_ = 0.0;
};

struct FieldState {
  std::vector<double> rho;
  std::vector<double> u;
  double t = 0.0;

  std::vector<double> momentum() const {
    std::vector<double> m(rho.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = rho[i] * u[i];
    return m;
  }

  void validate(const Grid1D& g) const {
    if (rho.size() != static_cast<std::size_t>(g.n()) || u.size() != rho.size())
      throw GridMismatch("field arrays do not match the grid");
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if (!std::isfinite(rho[i]) || !std::isfinite(u[i])) throw DomainError("non-finite field value");
      if (rho[i] < 0.0) throw DomainError("negative density at cell " + std::to_string(i));
    }
  }
};

// Field padded with `ghosts` cells on each side: periodic on the torus, far-field values on a line.
inline std::vector<double> padded(const Grid1D& g, std::span<const double> f, double left,
                                  double right, int ghosts = 2) {
  const int n = g.n();
  std::vector<double> p(n + 2 * ghosts);
  for (int i = 0; i < n; ++i) p[i + ghosts] = f[i];
  for (int k = 0; k < ghosts; ++k) {
    if (g.is_torus()) {
      p[k] = f[(n - ghosts + k) % n];
      p[n + ghosts + k] = f[k % n];
    } else {
      p[k] = left;
      p[n + ghosts + k] = right;
    }
  }
  return p;
}

inline std::vector<double> padded_rho(const Grid1D& g, std::span<const double> rho, int ghosts = 2) {
  if (g.is_torus()) return padded(g, rho, 0.0, 0.0, ghosts);
  return padded(g, rho, g.left_state().rho, g.right_state().rho, ghosts);
}

inline std::vector<double> padded_u(const Grid1D& g, std::span<const double> u, int ghosts = 2) {
  if (g.is_torus()) return padded(g, u, 0.0, 0.0, ghosts);
  return padded(g, u, g.left_state().u, g.right_state().u, ghosts);
}

// Central first and 3-point second derivatives at cell centres.
struct Derivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};

inline Derivatives central_derivatives(const Grid1D& g, std::span<const double> padded_f,
                                       int ghosts = 2) {
  const int n = g.n();
  const double dx = g.dx();
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    const int j = i + ghosts;
    d.d1[i] = (padded_f[j + 1] - padded_f[j - 1]) / (2.0 * dx);
    d.d2[i] = (padded_f[j + 1] - 2.0 * padded_f[j] + padded_f[j - 1]) / (dx * dx);
  }
  return d;
}

// Midpoint rule on cell centres.
inline double integrate(const Grid1D& g, std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.dx();
}

}  // namespace nsklab
