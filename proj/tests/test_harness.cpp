#include <gtest/gtest.h>

#include "nsklab/harness.hpp"

using namespace nsklab;

namespace {

ConstitutiveSet reference_set() {
  ConstitutiveSet c;
  c.pressure = PowerLaw(0.125, 2.0);
  c.viscosity = PowerLaw(1.0, 1.0);
  c.capillarity = PowerLaw(1.0, -1.0);
  return c;
}

}  // namespace

TEST(L1Distance, IdenticalAndSingleCell) {
  const auto g = Grid1D::torus(1.0, 20);
  FieldState a{std::vector<double>(20, 1.0), std::vector<double>(20, 0.5), 0.0};
  auto d = l1_distance(g, a, a);
  EXPECT_EQ(d.d_rho, 0.0);
  EXPECT_EQ(d.d_m, 0.0);
  FieldState b = a;
  b.rho[7] += 0.3;
  d = l1_distance(g, a, b);
  EXPECT_NEAR(d.d_rho, 0.3 * g.dx(), 1e-15);
  EXPECT_THROW(l1_distance(g, a, Grid1D::torus(1.0, 40), a), GridMismatch);
}

TEST(Ledgers, ConstantStateClosedForm) {
  const auto c = reference_set();
  const auto g = Grid1D::line(-1.0, 1.0, 2.0, 40);
  std::vector<FieldState> traj;
  for (double t : {0.0, 0.25, 0.5})
    traj.push_back({std::vector<double>(40, 2.0), std::vector<double>(40, 0.0), t});
  const auto L = higher_integrability_ledgers(traj, c, g, {-0.5, 0.5});
  EXPECT_NEAR(L.pressure, 1.0 * 0.5 * 2.0 * c.p(2.0), 1e-14);
  EXPECT_EQ(L.pressure_capillary, 0.0);
}

TEST(Ledgers, VacuumIsZero) {
  const auto g = Grid1D::torus(1.0, 16);
  std::vector<FieldState> traj{{std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), 0.0},
                               {std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), 1.0}};
  auto c = reference_set();
  c.capillarity = Law::zero();
  const auto L = higher_integrability_ledgers(traj, c, g, {});
  EXPECT_EQ(L.pressure, 0.0);
  EXPECT_EQ(L.velocity, 0.0);
  EXPECT_EQ(L.papillon_sup, 0.0);
}

TEST(MassCheck, TorusAndDisturbedBoundary) {
  const auto g = Grid1D::torus(1.0, 16);
  std::vector<FieldState> traj{{std::vector<double>(16, 1.0), std::vector<double>(16, 0.0), 0.0}};
  EXPECT_EQ(mass_conservation_check(traj, g), 0.0);
  const auto line = Grid1D::line(0.0, 1.0, 0.0, 16);
  std::vector<double> r(16, 0.0);
  r[0] = 1.0;
  std::vector<FieldState> hit{{r, std::vector<double>(16, 0.0), 0.0}};
  EXPECT_THROW(mass_conservation_check(hit, line), PreconditionError);
}

TEST(Sweep, Preconditions) {
  SweepConfig cfg;
  cfg.base = reference_set();
  cfg.eps_list = {0.1, 0.2};
  EXPECT_THROW(check_sweep_preconditions(cfg), ConfigError);
  cfg.eps_list = {0.1};
  EXPECT_THROW(check_sweep_preconditions(cfg), PreconditionError);
  cfg.allow_gamma_outside_limit_range = true;
  EXPECT_NO_THROW(check_sweep_preconditions(cfg));
  cfg.base.capillarity = PowerLaw(1.0, 0.0);
  try {
    check_sweep_preconditions(cfg);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("tc_global"), std::string::npos);
  }
}

TEST(Sweep, SingleCoarseRow) {
  SweepConfig cfg;
  cfg.base = reference_set();
  cfg.allow_gamma_outside_limit_range = true;
  cfg.eps_list = {0.1};
  cfg.solver.scheme = HyperbolicScheme::muscl;
  const auto rep = run_sweep(cfg);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_TRUE(rep.trend_ok);
  EXPECT_GT(rep.rows[0].d_rho, 0.0);
  EXPECT_TRUE(std::isfinite(rep.rows[0].edscr_ratio));
}

TEST(Sweep, CriticalScalingOscillatesMore) {
  SweepConfig cfg;
  cfg.base = reference_set();
  cfg.allow_gamma_outside_limit_range = true;
  cfg.eps_list = {0.05};
  cfg.solver.scheme = HyperbolicScheme::muscl;
  const double crit = run_sweep_row(cfg, 0.05).oscillation;
  cfg.delta_rule = {1.0, 3.0};
  const double sub = run_sweep_row(cfg, 0.05).oscillation;
  EXPECT_GT(crit, sub);
}
