#include <gtest/gtest.h>

#include "nsklab/conditions.hpp"
#include "nsklab/constitutive.hpp"

using namespace nsklab;

namespace {

ConstitutiveSet power_set(double alpha, double beta, double gamma = 2.0) {
  ConstitutiveSet c;
  c.pressure = PowerLaw(1.0, gamma);
  c.viscosity = PowerLaw(1.0, alpha);
  c.capillarity = PowerLaw(1.0, beta);
  return c;
}

}  // namespace

TEST(PowerLaw, EvaluatesAtPositiveDensity) {
  const PowerLaw p(2.5, Exponent(3, 2));
  EXPECT_DOUBLE_EQ(p(4.0), 2.5 * 8.0);
  EXPECT_DOUBLE_EQ(p.d1(4.0), 2.5 * 1.5 * 2.0);
  EXPECT_DOUBLE_EQ(p.d2(4.0), 2.5 * 1.5 * 0.5 / 2.0);
}

TEST(PowerLaw, VacuumRules) {
  EXPECT_EQ(PowerLaw(3.0, 2.0)(0.0), 0.0);
  EXPECT_EQ(PowerLaw(3.0, 0.0)(0.0), 3.0);
  EXPECT_THROW(PowerLaw(3.0, -1.0)(0.0), DomainError);
  EXPECT_THROW(PowerLaw(3.0, 2.0)(-1.0), DomainError);
}

TEST(Exponent, ParsesRatiosAndDecimals) {
  EXPECT_EQ(parse_exponent("2/3"), Exponent(2, 3));
  EXPECT_EQ(parse_exponent("-1.5"), Exponent(-3, 2));
  EXPECT_EQ(parse_exponent("4"), Exponent(4));
  EXPECT_THROW(parse_exponent("abc"), std::exception);
}

TEST(TabulatedLaw, ReproducesPowerLawBetweenNodes) {
  TabulatedLaw t({1.0, 2.0, 4.0}, {1.0, 4.0, 16.0});
  EXPECT_NEAR(t(3.0), 9.0, 1e-12);
  EXPECT_NEAR(t.d1(3.0), 6.0, 1e-12);
  EXPECT_THROW(TabulatedLaw({1.0, 1.0}, {1.0, 2.0}), DomainError);
}

TEST(ScaledLaws, EpsAndDelta) {
  auto c = power_set(1.0, -1.0);
  c.eps = 0.1;
  c.delta_rule = {2.0, 2.0};
  EXPECT_DOUBLE_EQ(c.mu_eps(3.0), 0.3);
  EXPECT_DOUBLE_EQ(c.kappa_eps(2.0), 2.0 * 0.01 * 0.5);
}

TEST(EulerConditions, Hyperbolicity) {
  for (double g : {2.0, 1.4}) {
    const auto r = check_euler_conditions(power_set(1.0, 0.0, g));
    EXPECT_EQ(r.verdict("hyperbolicity@rho=1.000000"), Verdict::holds);
    EXPECT_EQ(r.verdict("gamma_gt_1"), Verdict::holds);
  }
  ConstitutiveSet c = power_set(1.0, 0.0);
  c.pressure = PowerLaw(1.0, Exponent(5, 3));
  EXPECT_EQ(check_euler_conditions(c).verdict("limit_theorem_range"), Verdict::holds);
  EXPECT_EQ(check_euler_conditions(power_set(1.0, 0.0, 2.0)).verdict("limit_theorem_range"), Verdict::fails);
}

TEST(MildAssumptions, ViscosityLinearNoCapillarity) {
  ConstitutiveSet c;
  c.viscosity = PowerLaw(1.0, 1.0);
  const auto r = check_mild_assumptions(c);
  EXPECT_EQ(r.overall(), Verdict::holds);
  EXPECT_FALSE(r.at("mu_liminf_infinity").note.empty());
}

TEST(MildAssumptions, SqrtViscosityInverseCapillarity) {
  const auto r = check_mild_assumptions(power_set(0.5, -1.0));
  EXPECT_EQ(r.overall(), Verdict::holds);
  EXPECT_FALSE(r.at("mu_liminf_infinity").note.empty());
}

TEST(MildAssumptions, NegativeCapillarityFails) {
  auto c = power_set(1.0, -1.0);
  c.capillarity = PowerLaw(-1.0, -1.0);
  const auto r = check_mild_assumptions(c);
  EXPECT_EQ(r.verdict("kappa_zero_or_positive"), Verdict::fails);
  ASSERT_TRUE(r.at("kappa_zero_or_positive").witness);
  EXPECT_TRUE(r.at("kappa_zero_or_positive").witness->violated());
}

TEST(NoCavitation, Table) {
  EXPECT_EQ(check_nc(power_set(0.4, 0.0)).verdict("nc"), Verdict::holds);
  EXPECT_EQ(check_nc(power_set(1.0, -3.0)).verdict("nc"), Verdict::holds);
  EXPECT_EQ(check_nc(power_set(1.0, -1.0)).verdict("nc"), Verdict::fails);
}

TEST(StrongCoercivity, OpenInterval) {
  EXPECT_EQ(check_sc_powerlaw(1.0, 0.0).verdict("sc"), Verdict::holds);
  EXPECT_EQ(check_sc_powerlaw(1.0, 1.0).verdict("sc"), Verdict::fails);
  EXPECT_EQ(check_sc_powerlaw(1.0, -2.0).verdict("sc"), Verdict::fails);
}

TEST(StrongCoercivity, AgreesWithQuadraticSign) {
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 40; ++j) {
      const Exponent a(i, 10), b(-40 + 2 * j, 8);
      const bool inside = sc_quadratic(a, b) < Exponent(0);
      EXPECT_EQ(check_sc_powerlaw(a, b).verdict("sc") == Verdict::holds, inside)
          << to_string(a) << " " << to_string(b);
    }
}

TEST(TameCapillarity, Examples) {
  EXPECT_EQ(check_tc(power_set(1.0, -1.0)).verdict("tc_global"), Verdict::holds);
  EXPECT_EQ(check_tc(power_set(2.0, 1.0)).verdict("tc_global"), Verdict::holds);
  const auto r = check_tc(power_set(1.0, 0.0));
  EXPECT_EQ(r.verdict("tc_global"), Verdict::fails);
  EXPECT_TRUE(r.at("tc_global").witness->violated());
}

TEST(TameCapillarity, DeltaScaling) {
  auto c = power_set(1.0, -1.0);
  c.delta_rule = {1.0, 1.5};
  EXPECT_EQ(check_tc(c).verdict("delta_le_eps2"), Verdict::fails);
  c.delta_rule = {1.0, 3.0};
  EXPECT_EQ(check_tc(c).verdict("delta_le_eps2"), Verdict::holds);
}

TEST(TameCapillarity, BindingOnAlphaRange) {
  for (int k = 0; k <= 30; ++k) {
    const double a = 0.1 * k;
    EXPECT_EQ(check_tc(power_set(a, 2.0 * a - 3.0)).verdict("tc_global"), Verdict::holds) << a;
    EXPECT_EQ(check_tc(power_set(a, 2.0 * a - 2.9)).verdict("tc_global"), Verdict::fails) << a;
  }
}

TEST(GrowthConditions, Examples) {
  auto r = check_gr(power_set(1.0, -1.0));
  EXPECT_EQ(r.verdict("gr_small_rho"), Verdict::holds);
  EXPECT_EQ(r.verdict("gr_capillarity"), Verdict::holds);
  EXPECT_EQ(check_gr(power_set(0.5, -2.0)).verdict("gr_small_rho"), Verdict::fails);
  EXPECT_EQ(check_gr(power_set(1.0, -6.0)).verdict("gr_capillarity"), Verdict::fails);
}

TEST(Lagrangian, Transform) {
  auto c = power_set(1.0, -5.0);
  auto [nu, lambda] = lagrangian_coefficients(c);
  EXPECT_EQ(lambda.power().exponent, Exponent(0));
  EXPECT_EQ(nu.power().exponent, Exponent(-2));
  c.capillarity = Law::zero();
  EXPECT_TRUE(lagrangian_coefficients(c).second.is_zero());
}

TEST(Lagrangian, RoundTrip) {
  for (auto [a, b] : {std::pair{1.0, -1.0}, {0.5, 2.0}, {2.0, -4.0}}) {
    const auto c = power_set(a, b);
    const auto [nu, lambda] = lagrangian_coefficients(c);
    const auto [mu, kappa] = eulerian_coefficients(nu, lambda);
    EXPECT_EQ(mu, c.viscosity);
    EXPECT_EQ(kappa, c.capillarity);
  }
}
