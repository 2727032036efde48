#include <gtest/gtest.h>

#include "nsklab/constitutive.hpp"
#include "nsklab/entropy.hpp"

using namespace nsklab;

TEST(Chi, SupportAndVacuum) {
  const auto g = GasConstants::from_gamma(2.0);
  EXPECT_EQ(eval_chi(g, 0.0, 0.3, 0.3), 0.0);
  EXPECT_EQ(eval_chi(g, 4.0, 0.0, 2.0), 0.0);
  EXPECT_EQ(eval_chi(g, 4.0, 0.0, -2.5), 0.0);
  EXPECT_GT(eval_chi(g, 4.0, 0.0, 1.9), 0.0);
}

TEST(Chi, IndicatorForGammaThree) {
  const auto g = GasConstants::from_gamma(3.0);
  EXPECT_EQ(g.lambda, 0.0);
  EXPECT_EQ(g.theta, 1.0);
  EXPECT_EQ(eval_chi(g, 2.0, 1.0, 2.5), 1.0);
  EXPECT_EQ(eval_chi(g, 2.0, 1.0, 3.5), 0.0);
}

TEST(EntropyPair, KernelMass) {
  for (double gamma : {1.4, 5.0 / 3.0, 2.0, 3.0}) {
    const auto g = GasConstants::from_gamma(gamma);
    const auto one = build_pair(g, EntropySpec::monomial(0));
    const auto lin = build_pair(g, EntropySpec::monomial(1));
    for (double rho : {1e-3, 0.5, 7.0})
      for (double u : {-2.0, 0.0, 1.5}) {
        EXPECT_NEAR(one.eta(rho, u), g.c_lambda() * rho, 1e-12 * rho);
        EXPECT_NEAR(lin.eta(rho, u), g.c_lambda() * rho * u, 1e-12 * rho * (1.0 + std::fabs(u)));
      }
  }
}

TEST(EntropyPair, QuadraticIsMechanicalEnergy) {
  for (double gamma : {1.4, 5.0 / 3.0, 2.0}) {
    const auto g = GasConstants::from_gamma(gamma);
    ConstitutiveSet c;
    c.pressure = g.pressure();
    const auto e = build_pair(g, EntropySpec::monomial(2, 0.5));
    for (double rho : {1e-2, 1.0, 30.0})
      for (double u : {-1.0, 0.0, 2.0}) {
        const double E = 0.5 * rho * u * u + rho * internal_energy(c, rho);
        EXPECT_NEAR(e.eta(rho, u) / g.c_lambda(), E, 1e-8 * E + 1e-300);
      }
  }
}

TEST(EntropyPair, OddCubicVanishesAtRest) {
  const auto p = build_pair(GasConstants::from_gamma(2.0), EntropySpec::cubic_signed());
  for (double rho : {1e-3, 1.0, 1e3}) EXPECT_NEAR(p.eta(rho, 0.0), 0.0, 1e-13 * rho * rho);
}

TEST(EntropyPair, VacuumValues) {
  const auto g = GasConstants::from_gamma(1.4);
  const auto p = build_pair(g, EntropySpec::cubic_signed());
  const auto v = p.evaluate(0.0, 1.5);
  EXPECT_EQ(v.eta, 0.0);
  EXPECT_EQ(v.q, 0.0);
  EXPECT_DOUBLE_EQ(v.eta_m, g.c_lambda() * 3.0);
  EXPECT_THROW(p.eta(-1.0, 0.0), DomainError);
}

TEST(Bounds, CubicTable) {
  const auto g = GasConstants::from_gamma(2.0);
  const auto r = check_bounds_cubic(g, build_pair(g, EntropySpec::cubic_signed()));
  for (const auto& c : r.checks) EXPECT_TRUE(c.holds) << c.name << " " << c.constant;
}

TEST(Bounds, CubicFluxAtRestScalesExactly) {
  const auto g = GasConstants::from_gamma(2.0);
  const auto p = build_pair(g, EntropySpec::cubic_signed());
  const double ref = p.q(1.0, 0.0);
  EXPECT_GT(ref, 0.0);
  for (double rho : {1e-3, 0.1, 10.0, 1e3})
    EXPECT_NEAR(p.q(rho, 0.0) / std::pow(rho, g.gamma + g.theta), ref, 1e-10 * ref);
}

TEST(Bounds, PowerTables) {
  const auto g = GasConstants::from_gamma(1.4);
  for (double a : {0.25, 0.5, 1.0}) {
    const auto r = check_bounds_power(g, a, build_pair(g, EntropySpec::abs_power(a)),
                                      build_pair(g, EntropySpec::signed_power(a)));
    for (const auto& c : r.checks) EXPECT_TRUE(c.holds) << "a=" << a << " " << c.name;
  }
}

TEST(Bounds, PowerTableAtZero) {
  const auto g = GasConstants::from_gamma(1.4);
  const auto r = check_bounds_power(g, 0.0, build_pair(g, EntropySpec::abs_power(0.0)),
                                    build_pair(g, EntropySpec::signed_power(0.0)));
  EXPECT_TRUE(r.at("qt_lower").holds);
  EXPECT_FALSE(r.at("eta_mu_lower").holds);  // psi'' = 2 delta vanishes off |u| < rho^theta
  for (const auto& c : r.checks) EXPECT_TRUE(c.holds || c.name == "eta_mu_lower") << c.name;
}

TEST(Bounds, PowerTableAtOneMatchesCubic) {
  const auto g = GasConstants::from_gamma(2.0);
  const auto s = build_pair(g, EntropySpec::signed_power(1.0));
  const auto c = build_pair(g, EntropySpec::cubic_signed());
  for (double rho : {0.01, 1.0, 100.0})
    for (double u : {-3.0, 0.5}) EXPECT_NEAR(s.q(rho, u), c.q(rho, u), 1e-10 * std::fabs(c.q(rho, u)));
}

TEST(Bounds, CompactPsi) {
  const auto g = GasConstants::from_gamma(2.0);
  const auto p = build_pair(g, EntropySpec::compact(0.0, 1.0));
  EXPECT_TRUE(check_boundpsi(g, p).all_hold());
  const double rho = 4.0;
  EXPECT_EQ(p.eta(rho, 1.0 + std::pow(rho, g.theta) + 0.01), 0.0);
  EXPECT_THROW(check_boundpsi(g, build_pair(g, EntropySpec::cubic_signed())), DomainError);
}

TEST(Derivatives, MatchCenteredDifferences) {
  const auto g = GasConstants::from_gamma(1.4);
  const auto p = build_pair(g, EntropySpec::compact(0.2, 1.5));
  const double rho = 0.8, u = 0.3;
  auto err = [&](double h) {
    const double em = (p.eta(rho, u + h) - p.eta(rho, u - h)) / (2.0 * h * rho);
    const double emu = (p.eta_m(rho, u + h) - p.eta_m(rho, u - h)) / (2.0 * h);
    const double emr = (p.eta_m(rho + h, u) - p.eta_m(rho - h, u)) / (2.0 * h);
    return std::array{std::fabs(em - p.eta_m(rho, u)), std::fabs(emu - p.eta_mu(rho, u)),
                      std::fabs(emr - p.eta_mrho(rho, u))};
  };
  const auto e1 = err(0.02), e2 = err(0.01);
  for (int k = 0; k < 3; ++k) EXPECT_GE(std::log2(e1[k] / e2[k]), 1.9) << k;
}
