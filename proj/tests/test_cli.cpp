#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsklab/cli.hpp"

using namespace nsklab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nsklab_test_" + name);
  fs::remove_all(p);
  return p;
}

int run_quiet(const ExperimentConfig& cfg, const fs::path& out, std::string* err_text = nullptr) {
  std::ostringstream o, e;
  const int code = dispatch(cfg, {out, 1, &o, &e});
  if (err_text) *err_text = e.str();
  return code;
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const auto cfg = parse_config("experiment: conditions\n");
  EXPECT_EQ(cfg.experiment, Experiment::conditions);
  EXPECT_EQ(cfg.constitutive.gamma(), 2.0);
  EXPECT_TRUE(cfg.constitutive.capillarity.is_zero());
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.scan.alphas.size(), 41u);
  EXPECT_EQ(cfg.sweep.eps_list.size(), 4u);
  EXPECT_NO_THROW(parse_config(""));
}

TEST(Config, FullBlocks) {
  const auto cfg = parse_config(R"(experiment: simulate
seed: 9
constitutive:
  pressure: {coeff: 0.125, exp: 2}
  viscosity: {coeff: 1, exp: 1}
  capillarity: {coeff: 1, exp: -1}
  eps: 0.01
grid: {domain: line, x_min: -2, x_max: 2, rho_star: 1, cells: 64, left: {rho: 4, u: 0}}
solver: {scheme: muscl, t_end: 0.2, snapshot_dt: 0.05}
initial: {type: riemann, riemann: {rho_l: 4, rho_r: 1}}
)");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.constitutive.beta(), -1.0);
  EXPECT_EQ(cfg.solver.scheme, HyperbolicScheme::muscl);
  const auto g = cfg.grid.build();
  EXPECT_FALSE(g.is_torus());
  EXPECT_EQ(g.left_state().rho, 4.0);
  EXPECT_NEAR(cfg.initial.build(g).rho.front(), 4.0, 1e-2);
}

TEST(Config, ExponentsAsRatios) {
  const auto cfg = parse_config("constitutive:\n  pressure: {coeff: 1, exp: 5/3}\n");
  EXPECT_EQ(cfg.constitutive.pressure.exponent, Exponent(5, 3));
}

TEST(Config, GammaBelowOne) {
  try {
    parse_config("constitutive:\n  pressure: {coeff: 1, exp: 0.9}\n");
    FAIL();
  } catch (const SchemaError& e) {
    ASSERT_EQ(e.issues.size(), 1u);
    EXPECT_NE(e.issues[0].find("gamma must exceed 1"), std::string::npos);
  }
}

TEST(Config, AggregatesErrorsWithLines) {
  try {
    parse_config("experiment: simulate\nfoo: 1\ngrid: {cells: 2}\nsolver: {scheme: weno}\n");
    FAIL();
  } catch (const SchemaError& e) {
    ASSERT_EQ(e.issues.size(), 3u);
    EXPECT_EQ(e.issues[0].rfind("line 2:", 0), 0u);
    EXPECT_EQ(e.issues[1].rfind("line 3:", 0), 0u);
    EXPECT_EQ(e.issues[2].rfind("line 4:", 0), 0u);
  }
  EXPECT_THROW(parse_config("experiment: nope\n"), SchemaError);
  EXPECT_THROW(parse_config("grid: [1, 2\n"), SchemaError);
}

TEST(Dispatch, ShallowWaterConditions) {
  auto cfg = parse_config(R"(experiment: conditions
constitutive:
  pressure: {coeff: 1, exp: 2}
  viscosity: {coeff: 1, exp: 1}
  capillarity: {coeff: 1, exp: 0}
)");
  EXPECT_EQ(check_sc(cfg.constitutive).verdict("sc"), Verdict::holds);
  const auto out = scratch("sw");
  EXPECT_EQ(run_quiet(cfg, out), 0);
  const auto csv = slurp(out / "conditions.csv");
  EXPECT_EQ(csv.rfind("name,verdict,binding,witness\n", 0), 0u);
  EXPECT_NE(csv.find("\nsc,holds,"), std::string::npos);
}

TEST(Dispatch, QuantumConditions) {
  auto cfg = parse_config(R"(experiment: conditions
constitutive:
  viscosity: {coeff: 1, exp: 1}
  capillarity: {coeff: 1, exp: -1}
)");
  const auto out = scratch("quantum");
  EXPECT_EQ(run_quiet(cfg, out), 0);
  EXPECT_NE(slurp(out / "conditions.csv").find("\ntc_global,holds,"), std::string::npos);
}

TEST(Dispatch, SweepSurfacesFailingTameCapillarity) {
  auto cfg = parse_config(R"(experiment: sweep
constitutive:
  viscosity: {coeff: 1, exp: 1}
  capillarity: {coeff: 1, exp: 0}
)");
  std::string err;
  EXPECT_EQ(run_quiet(cfg, scratch("tc"), &err), 1);
  EXPECT_NE(err.find("beta = 2 alpha - 3"), std::string::npos);
}

TEST(Dispatch, DeterministicOutputsAndManifest) {
  auto cfg = parse_config(R"(experiment: sobolev-test
sobolev_test: {profiles: 20, extremizers: [], limit_alphas: []}
)");
  const auto a = scratch("det_a"), b = scratch("det_b");
  EXPECT_EQ(run_quiet(cfg, a), 0);
  std::ostringstream o, e;
  EXPECT_EQ(dispatch(cfg, {b, 4, &o, &e}), 0);
  EXPECT_EQ(slurp(a / "sobolev.csv"), slurp(b / "sobolev.csv"));
  const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(m["config_hash"], "fnv1a64:" + hex64(fnv1a(cfg.source)));
  EXPECT_EQ(m["experiment"], "sobolev-test");
}

TEST(Dispatch, RiemannAndEntropyTable) {
  auto cfg = parse_config("experiment: riemann\nconstitutive:\n  pressure: {coeff: 0.125, exp: 2}\n");
  EXPECT_EQ(run_quiet(cfg, scratch("riemann")), 0);
  cfg.experiment = Experiment::entropy_table;
  const auto out = scratch("table");
  EXPECT_EQ(run_quiet(cfg, out), 0);
  EXPECT_EQ(slurp(out / "entropy_table.csv").rfind("rho,u,eta,q,eta_m,eta_mu,eta_mrho\n", 0), 0u);
}

TEST(Csv, SeventeenSignificantDigits) {
  EXPECT_EQ(format_real(0.1), "1.0000000000000001e-01");
  EXPECT_EQ(format_real(-2.0), "-2.0000000000000000e+00");
}
