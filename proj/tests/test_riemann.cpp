#include <gtest/gtest.h>

#include "nsklab/riemann.hpp"

using namespace nsklab;

namespace {

RiemannData data(double rl, double ul, double rr, double ur, double gamma = 2.0) {
  return {rl, ul, rr, ur, GasConstants::from_gamma(gamma)};
}

}  // namespace

TEST(Riemann, EqualStatesHaveNoWaves) {
  const auto s = solve_riemann(data(1.3, 0.2, 1.3, 0.2));
  EXPECT_TRUE(s.waves().empty());
  const auto st = s.sample(0.7);
  EXPECT_EQ(st.rho, 1.3);
  EXPECT_EQ(st.u, 0.2);
}

TEST(Riemann, VacuumThreshold) {
  const auto g = GasConstants::from_gamma(1.4);
  const double w = 2.0 / (g.gamma - 1.0) * g.sound_speed(1.0);
  for (double f : {0.9, 0.999, 1.001, 1.5}) {
    const auto d = data(1.0, -f * w, 1.0, f * w, 1.4);
    EXPECT_EQ(solve_riemann(d).has_vacuum(), vacuum_expected(d)) << f;
    EXPECT_EQ(vacuum_expected(d), f >= 1.0);
  }
  const auto s = solve_riemann(data(1.0, -2.0 * w, 1.0, 2.0 * w, 1.4));
  EXPECT_EQ(s.sample(0.0).rho, 0.0);
}

TEST(Riemann, SingleShockFromHugoniotCurve) {
  const auto g = GasConstants::from_gamma(2.0);
  auto p = [&](double r) { return g.p0 * r * r; };
  const double r1 = 1.0, r2 = 2.0, u1 = 0.4;
  const double u2 = u1 - std::sqrt((p(r2) - p(r1)) * (r2 - r1) / (r1 * r2));
  const auto s = solve_riemann(data(r1, u1, r2, u2));
  int shocks = 0;
  for (const auto& w : s.waves())
    if (w.type == WaveType::shock) ++shocks;
  EXPECT_EQ(shocks, 1);
  EXPECT_NEAR(s.star_left().rho, r2, 1e-10);
  for (const auto& r : rh_residuals(s)) {
    EXPECT_LE(r.mass, 1e-10);
    EXPECT_LE(r.momentum, 1e-10);
  }
}

TEST(Riemann, RarefactionInvariant) {
  const auto s = solve_riemann(data(4.0, 0.0, 1.0, 0.0));
  EXPECT_LE(rarefaction_invariant_residual(s), 1e-10);
  const auto v = solve_riemann(data(1.0, -3.0, 1.0, 3.0));
  EXPECT_LE(rarefaction_invariant_residual(v), 1e-10);
}

TEST(Riemann, DamBreakStarState) {
  const auto s = solve_riemann({4.0, 0.0, 1.0, 0.0, GasConstants{2.0, 0.5, 0.5, 0.125}});
  EXPECT_NEAR(s.star_left().rho, 2.2, 0.01);
  EXPECT_NEAR(s.star_left().u, 0.515, 0.005);
}

TEST(Riemann, MirrorSymmetry) {
  const auto a = solve_riemann(data(3.0, 0.5, 1.0, -0.2));
  const auto b = solve_riemann(data(1.0, 0.2, 3.0, -0.5));
  for (double xi : {-2.0, -0.7, 0.1, 0.9, 2.5}) {
    EXPECT_NEAR(a.sample(xi).rho, b.sample(-xi).rho, 1e-12);
    EXPECT_NEAR(a.sample(xi).u, -b.sample(-xi).u, 1e-12);
  }
}

TEST(Riemann, SelfSimilarSampling) {
  const auto s = solve_riemann(data(4.0, 0.0, 1.0, 0.0));
  const auto g = Grid1D::line(-1.0, 1.0, 1.0, 64);
  const auto g2 = Grid1D::line(-2.0, 2.0, 1.0, 64);
  const auto a = sample_on_grid(s, g, 0.3), b = sample_on_grid(s, g2, 0.6);
  for (int i = 0; i < 64; ++i) EXPECT_DOUBLE_EQ(a.rho[i], b.rho[i]);
}

TEST(Riemann, EarlyTimeReproducesData) {
  const auto s = solve_riemann(data(4.0, 0.1, 1.0, -0.3));
  const auto g = Grid1D::line(-1.0, 1.0, 1.0, 40);
  const auto f = sample_on_grid(s, g, 1e-6);
  EXPECT_EQ(f.rho.front(), 4.0);
  EXPECT_EQ(f.u.back(), -0.3);
  EXPECT_THROW(sample_on_grid(s, g, 0.0), DomainError);
}

TEST(Riemann, EntropyResiduals) {
  const auto g = GasConstants::from_gamma(2.0);
  const auto energy = build_pair(g, EntropySpec::monomial(2, 0.5));
  const auto flat = solve_riemann(data(1.0, 0.3, 1.0, 0.3));
  EXPECT_NEAR(entropy_residual(flat, energy, -1.0, 1.0, 0.1, 0.5), 0.0, 1e-12);
  const auto raref = solve_riemann(data(1.0, -0.5, 1.0, 0.5));
  EXPECT_NEAR(entropy_residual(raref, energy, -3.0, 3.0, 0.1, 0.5), 0.0, 1e-8);
  auto p = [&](double r) { return g.p0 * r * r; };
  const double u2 = 0.4 - std::sqrt((p(2.0) - p(1.0)) * 1.0 / 2.0);
  const auto shock = solve_riemann(data(1.0, 0.4, 2.0, u2));
  EXPECT_LT(entropy_residual(shock, energy, -3.0, 3.0, 0.1, 0.5), 0.0);
}
