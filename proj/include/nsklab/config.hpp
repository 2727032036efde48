#pragma once

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nsklab/coercivity.hpp"
#include "nsklab/constitutive.hpp"
#include "nsklab/entropy.hpp"
#include "nsklab/errors.hpp"
#include "nsklab/grid.hpp"
#include "nsklab/harness.hpp"
#include "nsklab/rational.hpp"
#include "nsklab/solver.hpp"

namespace nsklab {

struct SchemaError : Error {
  explicit SchemaError(std::vector<std::string> list) : Error(join(list)), issues(std::move(list)) {}
  std::vector<std::string> issues;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid config:";
    for (const auto& e : v) s += "\n  " + e;
    return s;
  }
};

enum class Experiment { simulate, sweep, coercivity_scan, sobolev_test, riemann, entropy_table, conditions };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::simulate: return "simulate";
    case Experiment::sweep: return "sweep";
    case Experiment::coercivity_scan: return "coercivity-scan";
    case Experiment::sobolev_test: return "sobolev-test";
    case Experiment::riemann: return "riemann";
    case Experiment::entropy_table: return "entropy-table";
    default: return "conditions";
  }
}

inline std::optional<Experiment> parse_experiment(const std::string& s) {
  for (auto e : {Experiment::simulate, Experiment::sweep, Experiment::coercivity_scan,
                 Experiment::sobolev_test, Experiment::riemann, Experiment::entropy_table,
                 Experiment::conditions})
    if (s == to_string(e)) return e;
  return std::nullopt;
}

struct GridSpec {
  std::variant<Torus, Line> domain = Torus{1.0};
  int cells = 256;
  Grid1D build() const { return Grid1D(domain, cells); }
};

struct InitialSpec {
  std::string type = "plateau";  // plateau | riemann | constant | sine
  double rho_lo = 1.0, rho_hi = 2.0, x0 = 0.25, x1 = 0.75, width = 0.02;
  double rho = 1.0, u = 0.0, amplitude = 0.1;
  RiemannStates riemann{};
  double mollify_cells = 10.0;

  FieldState build(const Grid1D& g) const;
};

struct ScanSpec {
  std::vector<double> alphas, betas;
  AdversarialOptions options{};
};

struct SobolevSpec {
  double a = 4.0;
  int profiles = 1000;
  int modes = 4;
  double amplitude = 1.0;
  int cells = 256;
  std::vector<std::pair<double, double>> extremizers{{1.001, 1e-280}};
  std::vector<double> limit_alphas{1.1, 1.5, 2.0};
};

struct RiemannSpec {
  RiemannStates states{};
  double t = 0.5;
};

struct EntropyTableSpec {
  EntropySpec psi = EntropySpec::cubic_signed();
  double rho_min = 1e-3, rho_max = 1e3;
  int rho_count = 13;
  double u_min = -2.0, u_max = 2.0;
  int u_count = 9;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::conditions;
  ConstitutiveSet constitutive{};
  GridSpec grid{};
  bool grid_given = false;
  SolverConfig solver{};
  InitialSpec initial{};
  SweepConfig sweep{};
  ScanSpec scan{};
  SobolevSpec sobolev{};
  RiemannSpec riemann{};
  EntropyTableSpec entropy{};
  std::string output = "out";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string source;
};

inline FieldState InitialSpec::build(const Grid1D& g) const {
  const int n = g.n();
  FieldState s{std::vector<double>(n), std::vector<double>(n, u), 0.0};
  for (int i = 0; i < n; ++i) {
    const double x = g.x(i);
    if (type == "plateau") {
      s.rho[i] = rho_lo + 0.5 * (rho_hi - rho_lo) * (std::tanh((x - x0) / width) - std::tanh((x - x1) / width));
    } else if (type == "constant") {
      s.rho[i] = rho;
    } else if (type == "sine") {
      s.rho[i] = rho + amplitude * std::sin(2.0 * std::numbers::pi * (x - g.x_min()) / g.length());
    } else {
      const double h = 0.5 * (1.0 + std::tanh(x / (mollify_cells * g.dx())));
      s.rho[i] = riemann.rho_l + (riemann.rho_r - riemann.rho_l) * h;
      s.u[i] = riemann.u_l + (riemann.u_r - riemann.u_l) * h;
    }
  }
  return s;
}

namespace detail {

class SchemaReader {
 public:
  std::vector<std::string> issues;

  void fail(const YAML::Node& n, const std::string& msg) {
    const auto m = n.Mark();
    issues.push_back(m.line >= 0 ? "line " + std::to_string(m.line + 1) + ": " + msg : msg);
  }

  bool expect_map(const YAML::Node& n, const std::string& path) {
    if (!n.IsMap()) {
      fail(n, path + " must be a mapping");
      return false;
    }
    return true;
  }

  void allow(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> keys) {
    if (!n.IsMap()) return;
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : n) {
      const auto k = kv.first.as<std::string>();
      if (!ok.count(k)) fail(kv.first, "unknown key '" + (path.empty() ? k : path + "." + k) + "'");
    }
  }

  template <class T>
  void get(const YAML::Node& n, const char* key, T& out, const std::string& path) {
    const auto v = n[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, path + "." + key + " has the wrong type");
    }
  }

  void get_exponent(const YAML::Node& v, Exponent& out, const std::string& path) {
    try {
      out = parse_exponent(v.as<std::string>());
    } catch (const std::exception&) {
      fail(v, path + " is not a number or ratio");
    }
  }

  // {coeff, exp}
  std::optional<PowerLaw> power_law(const YAML::Node& n, const std::string& path) {
    if (!expect_map(n, path)) return std::nullopt;
    allow(n, path, {"coeff", "exp"});
    PowerLaw p{1.0, Exponent(0)};
    get(n, "coeff", p.coefficient, path);
    if (n["exp"]) get_exponent(n["exp"], p.exponent, path + ".exp");
    else fail(n, path + ".exp is required");
    return p;
  }

  // "zero" | {coeff, exp} | {table: {rho: [...], value: [...]}}
  std::optional<Law> law(const YAML::Node& n, const std::string& path, bool zero_ok) {
    if (n.IsScalar() && n.as<std::string>() == "zero") {
      if (zero_ok) return Law::zero();
      fail(n, path + " cannot be zero");
      return std::nullopt;
    }
    if (n.IsMap() && n["table"]) {
      allow(n, path, {"table"});
      const auto t = n["table"];
      allow(t, path + ".table", {"rho", "value"});
      std::vector<double> r, v;
      get(t, "rho", r, path + ".table");
      get(t, "value", v, path + ".table");
      try {
        return Law(TabulatedLaw(r, v));
      } catch (const DomainError& e) {
        fail(t, e.what());
        return std::nullopt;
      }
    }
    auto p = power_law(n, path);
    if (!p) return std::nullopt;
    return Law(*p);
  }

  RiemannStates riemann_states(const YAML::Node& n, const std::string& path) {
    RiemannStates s;
    if (!expect_map(n, path)) return s;
    allow(n, path, {"rho_l", "u_l", "rho_r", "u_r"});
    get(n, "rho_l", s.rho_l, path);
    get(n, "u_l", s.u_l, path);
    get(n, "rho_r", s.rho_r, path);
    get(n, "u_r", s.u_r, path);
    if (s.rho_l < 0.0 || s.rho_r < 0.0) fail(n, path + " densities must be >= 0");
    return s;
  }

  std::vector<double> range(const YAML::Node& n, const std::string& path, bool log_spaced) {
    if (!expect_map(n, path)) return {};
    allow(n, path, {"min", "max", "count"});
    double lo = 0.0, hi = 1.0;
    int count = 2;
    get(n, "min", lo, path);
    get(n, "max", hi, path);
    get(n, "count", count, path);
    if (count < 1) {
      fail(n, path + ".count must be >= 1");
      return {};
    }
    if (log_spaced && !(lo > 0.0 && hi > 0.0)) {
      fail(n, path + " bounds must be positive");
      return {};
    }
    std::vector<double> v;
    for (int k = 0; k < count; ++k) {
      const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
      v.push_back(log_spaced ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                             : lo + t * (hi - lo));
    }
    return v;
  }
};

}  // namespace detail

// Parses and validates a YAML experiment description; all schema problems are reported together.
inline ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw SchemaError({"line " + std::to_string(e.mark.line + 1) + ": " + e.msg});
  }
  ExperimentConfig cfg;
  cfg.source = text;
  detail::SchemaReader R;
  if (!root || root.IsNull()) return cfg;
  if (!R.expect_map(root, "config")) throw SchemaError(R.issues);
  R.allow(root, "", {"experiment", "seed", "output", "threads", "constitutive", "grid", "solver",
                     "initial", "sweep", "coercivity_scan", "sobolev_test", "riemann", "entropy_table"});

  if (const auto e = root["experiment"]) {
    const auto name = e.as<std::string>();
    if (auto x = parse_experiment(name)) cfg.experiment = *x;
    else R.fail(e, "unknown experiment '" + name + "'");
  }
  R.get(root, "seed", cfg.seed, "config");
  R.get(root, "output", cfg.output, "config");
  R.get(root, "threads", cfg.threads, "config");

  if (const auto c = root["constitutive"]; c && R.expect_map(c, "constitutive")) {
    R.allow(c, "constitutive", {"pressure", "viscosity", "capillarity", "eps", "delta"});
    if (c["pressure"]) {
      if (auto p = R.power_law(c["pressure"], "constitutive.pressure")) {
        if (!(p->exp() > 1.0)) R.fail(c["pressure"], "gamma must exceed 1");
        if (!(p->coefficient > 0.0)) R.fail(c["pressure"], "pressure coefficient must be positive");
        cfg.constitutive.pressure = *p;
      }
    }
    if (c["viscosity"])
      if (auto l = R.law(c["viscosity"], "constitutive.viscosity", false)) {
        if (l->is_power() && !(l->power().coefficient > 0.0))
          R.fail(c["viscosity"], "viscosity coefficient must be positive");
        cfg.constitutive.viscosity = *l;
      }
    if (c["capillarity"])
      if (auto l = R.law(c["capillarity"], "constitutive.capillarity", true)) cfg.constitutive.capillarity = *l;
    R.get(c, "eps", cfg.constitutive.eps, "constitutive");
    if (!(cfg.constitutive.eps > 0.0)) R.fail(c, "constitutive.eps must be positive");
    if (const auto d = c["delta"]; d && R.expect_map(d, "constitutive.delta")) {
      R.allow(d, "constitutive.delta", {"coeff", "power"});
      R.get(d, "coeff", cfg.constitutive.delta_rule.coefficient, "constitutive.delta");
      R.get(d, "power", cfg.constitutive.delta_rule.power, "constitutive.delta");
    }
  }

  if (const auto g = root["grid"]; g && R.expect_map(g, "grid")) {
    cfg.grid_given = true;
    R.allow(g, "grid", {"domain", "length", "x_min", "x_max", "rho_star", "left", "right", "cells"});
    std::string dom = "torus";
    R.get(g, "domain", dom, "grid");
    R.get(g, "cells", cfg.grid.cells, "grid");
    if (cfg.grid.cells < 8) R.fail(g, "grid.cells must be >= 8");
    if (dom == "torus") {
      Torus t;
      R.get(g, "length", t.length, "grid");
      if (!(t.length > 0.0)) R.fail(g, "grid.length must be positive");
      cfg.grid.domain = t;
    } else if (dom == "line") {
      Line l;
      R.get(g, "x_min", l.x_min, "grid");
      R.get(g, "x_max", l.x_max, "grid");
      R.get(g, "rho_star", l.rho_star, "grid");
      if (!(l.x_max > l.x_min)) R.fail(g, "grid.x_max must exceed grid.x_min");
      if (l.rho_star < 0.0) R.fail(g, "grid.rho_star must be >= 0");
      for (const char* side : {"left", "right"}) {
        if (const auto s = g[side]; s && R.expect_map(s, std::string("grid.") + side)) {
          R.allow(s, std::string("grid.") + side, {"rho", "u"});
          FarField f;
          R.get(s, "rho", f.rho, "grid");
          R.get(s, "u", f.u, "grid");
          (std::string(side) == "left" ? l.left : l.right) = f;
        }
      }
      cfg.grid.domain = l;
    } else {
      R.fail(g["domain"], "grid.domain must be 'torus' or 'line'");
    }
  }

  if (const auto s = root["solver"]; s && R.expect_map(s, "solver")) {
    R.allow(s, "solver", {"cfl_hyp", "cfl_visc", "cfl_disp", "rho_floor", "lifting", "t_end",
                          "snapshot_dt", "scheme", "max_steps"});
    auto& v = cfg.solver;
    R.get(s, "cfl_hyp", v.cfl_hyp, "solver");
    R.get(s, "cfl_visc", v.cfl_visc, "solver");
    R.get(s, "cfl_disp", v.cfl_disp, "solver");
    R.get(s, "rho_floor", v.rho_floor, "solver");
    R.get(s, "lifting", v.lifting, "solver");
    R.get(s, "t_end", v.t_end, "solver");
    R.get(s, "snapshot_dt", v.snapshot_dt, "solver");
    R.get(s, "max_steps", v.max_steps, "solver");
    std::string scheme = to_string(v.scheme);
    R.get(s, "scheme", scheme, "solver");
    try {
      v.scheme = parse_scheme(scheme);
      v.validate();
    } catch (const ConfigError& e) {
      R.fail(s, e.what());
    }
  }

  if (const auto i = root["initial"]; i && R.expect_map(i, "initial")) {
    R.allow(i, "initial", {"type", "rho_lo", "rho_hi", "x0", "x1", "width", "rho", "u", "amplitude",
                           "riemann", "mollify_cells"});
    auto& v = cfg.initial;
    R.get(i, "type", v.type, "initial");
    if (v.type != "plateau" && v.type != "riemann" && v.type != "constant" && v.type != "sine")
      R.fail(i, "initial.type must be plateau, riemann, constant or sine");
    R.get(i, "rho_lo", v.rho_lo, "initial");
    R.get(i, "rho_hi", v.rho_hi, "initial");
    R.get(i, "x0", v.x0, "initial");
    R.get(i, "x1", v.x1, "initial");
    R.get(i, "width", v.width, "initial");
    R.get(i, "rho", v.rho, "initial");
    R.get(i, "u", v.u, "initial");
    R.get(i, "amplitude", v.amplitude, "initial");
    R.get(i, "mollify_cells", v.mollify_cells, "initial");
    if (i["riemann"]) v.riemann = R.riemann_states(i["riemann"], "initial.riemann");
    if (!(v.width > 0.0)) R.fail(i, "initial.width must be positive");
  }

  if (const auto s = root["sweep"]; s && R.expect_map(s, "sweep")) {
    R.allow(s, "sweep", {"eps_list", "delta", "riemann", "x_min", "x_max", "dx_per_eps", "mollify_cells",
                         "window", "T", "snapshots", "allow_gamma_outside_limit_range", "trend_allowance"});
    auto& v = cfg.sweep;
    R.get(s, "eps_list", v.eps_list, "sweep");
    R.get(s, "x_min", v.x_min, "sweep");
    R.get(s, "x_max", v.x_max, "sweep");
    R.get(s, "dx_per_eps", v.dx_per_eps, "sweep");
    R.get(s, "mollify_cells", v.mollify_cells, "sweep");
    R.get(s, "T", v.T, "sweep");
    R.get(s, "snapshots", v.snapshots, "sweep");
    R.get(s, "allow_gamma_outside_limit_range", v.allow_gamma_outside_limit_range, "sweep");
    R.get(s, "trend_allowance", v.trend_allowance, "sweep");
    if (s["riemann"]) v.riemann = R.riemann_states(s["riemann"], "sweep.riemann");
    if (const auto w = s["window"]) {
      std::vector<double> win;
      R.get(s, "window", win, "sweep");
      if (win.size() == 2 && win[0] < win[1]) v.window = {win[0], win[1]};
      else R.fail(w, "sweep.window must be [x0, x1] with x0 < x1");
    }
    if (const auto d = s["delta"]; d && R.expect_map(d, "sweep.delta")) {
      R.allow(d, "sweep.delta", {"kind", "coeff", "power"});
      std::string kind = "critical";
      R.get(d, "kind", kind, "sweep.delta");
      R.get(d, "coeff", v.delta_rule.coefficient, "sweep.delta");
      if (kind == "critical") {
        v.delta_rule.power = 2.0;
        if (d["power"]) R.fail(d["power"], "sweep.delta.power applies only to the subcritical kind");
      } else if (kind == "subcritical") {
        v.delta_rule.power = 3.0;
        R.get(d, "power", v.delta_rule.power, "sweep.delta");
        if (!(v.delta_rule.power > 2.0)) R.fail(d, "subcritical delta needs power > 2");
      } else {
        R.fail(d["kind"], "sweep.delta.kind must be critical or subcritical");
      }
    }
    for (std::size_t k = 0; k < v.eps_list.size(); ++k)
      if (!(v.eps_list[k] > 0.0) || (k > 0 && !(v.eps_list[k] < v.eps_list[k - 1])))
        R.fail(s["eps_list"], "sweep.eps_list must be positive and strictly decreasing");
  }

  if (const auto s = root["coercivity_scan"]; s && R.expect_map(s, "coercivity_scan")) {
    R.allow(s, "coercivity_scan", {"alpha", "beta", "modes", "restarts", "evals_per_restart", "amplitude",
                                   "quad_points", "cusp_family", "cusp_evals"});
    auto& v = cfg.scan;
    if (s["alpha"]) v.alphas = R.range(s["alpha"], "coercivity_scan.alpha", false);
    if (s["beta"]) v.betas = R.range(s["beta"], "coercivity_scan.beta", false);
    R.get(s, "modes", v.options.modes, "coercivity_scan");
    R.get(s, "restarts", v.options.restarts, "coercivity_scan");
    R.get(s, "evals_per_restart", v.options.evals_per_restart, "coercivity_scan");
    R.get(s, "amplitude", v.options.amplitude, "coercivity_scan");
    R.get(s, "quad_points", v.options.quad_points, "coercivity_scan");
    R.get(s, "cusp_family", v.options.cusp_family, "coercivity_scan");
    R.get(s, "cusp_evals", v.options.cusp_evals, "coercivity_scan");
    if (v.options.modes < 1 || v.options.restarts < 1) R.fail(s, "modes and restarts must be >= 1");
  }
  if (cfg.scan.alphas.empty())
    for (int k = 0; k <= 40; ++k) cfg.scan.alphas.push_back(0.05 * k);
  if (cfg.scan.betas.empty())
    for (int k = 0; k <= 40; ++k) cfg.scan.betas.push_back(-4.0 + 0.125 * k);

  if (const auto s = root["sobolev_test"]; s && R.expect_map(s, "sobolev_test")) {
    R.allow(s, "sobolev_test", {"a", "profiles", "modes", "amplitude", "cells", "extremizers", "limit_alphas"});
    auto& v = cfg.sobolev;
    R.get(s, "a", v.a, "sobolev_test");
    R.get(s, "profiles", v.profiles, "sobolev_test");
    R.get(s, "modes", v.modes, "sobolev_test");
    R.get(s, "amplitude", v.amplitude, "sobolev_test");
    R.get(s, "cells", v.cells, "sobolev_test");
    R.get(s, "limit_alphas", v.limit_alphas, "sobolev_test");
    if (const auto e = s["extremizers"]) {
      v.extremizers.clear();
      if (!e.IsSequence()) R.fail(e, "sobolev_test.extremizers must be a list");
      else
        for (const auto& item : e) {
          R.allow(item, "sobolev_test.extremizers[]", {"alpha", "eps"});
          double al = 1.001, ep = 1e-280;
          R.get(item, "alpha", al, "sobolev_test.extremizers[]");
          R.get(item, "eps", ep, "sobolev_test.extremizers[]");
          if (!(al > 1.0) || !(ep > 0.0)) R.fail(item, "extremizer needs alpha > 1 and eps > 0");
          v.extremizers.emplace_back(al, ep);
        }
    }
    if (!(v.a > 1.0)) R.fail(s, "sobolev_test.a must exceed 1");
  }

  if (const auto s = root["riemann"]; s && R.expect_map(s, "riemann")) {
    R.allow(s, "riemann", {"rho_l", "u_l", "rho_r", "u_r", "t"});
    YAML::Node states;
    for (const char* k : {"rho_l", "u_l", "rho_r", "u_r"})
      if (s[k]) states[k] = s[k];
    if (states.size() > 0) cfg.riemann.states = R.riemann_states(states, "riemann");
    R.get(s, "t", cfg.riemann.t, "riemann");
    if (!(cfg.riemann.t > 0.0)) R.fail(s, "riemann.t must be positive");
  }

  if (const auto s = root["entropy_table"]; s && R.expect_map(s, "entropy_table")) {
    R.allow(s, "entropy_table", {"psi", "rho", "u"});
    auto& v = cfg.entropy;
    if (const auto p = s["psi"]; p && R.expect_map(p, "entropy_table.psi")) {
      R.allow(p, "entropy_table.psi", {"kind", "a", "center", "width", "degree"});
      std::string kind = "cubic_signed";
      double a = 1.0, center = 0.0, width = 1.0;
      int degree = 0;
      R.get(p, "kind", kind, "entropy_table.psi");
      R.get(p, "a", a, "entropy_table.psi");
      R.get(p, "center", center, "entropy_table.psi");
      R.get(p, "width", width, "entropy_table.psi");
      R.get(p, "degree", degree, "entropy_table.psi");
      try {
        if (kind == "cubic_signed") v.psi = EntropySpec::cubic_signed();
        else if (kind == "abs_power") v.psi = EntropySpec::abs_power(a);
        else if (kind == "signed_power") v.psi = EntropySpec::signed_power(a);
        else if (kind == "compact") v.psi = EntropySpec::compact(center, width);
        else if (kind == "monomial") v.psi = EntropySpec::monomial(degree);
        else R.fail(p, "unknown entropy kind '" + kind + "'");
      } catch (const DomainError& e) {
        R.fail(p, e.what());
      }
    }
    if (const auto r = s["rho"]) {
      const auto v_rho = R.range(r, "entropy_table.rho", true);
      if (!v_rho.empty()) {
        v.rho_min = v_rho.front();
        v.rho_max = v_rho.back();
        v.rho_count = static_cast<int>(v_rho.size());
      }
    }
    if (const auto u = s["u"]) {
      const auto v_u = R.range(u, "entropy_table.u", false);
      if (!v_u.empty()) {
        v.u_min = v_u.front();
        v.u_max = v_u.back();
        v.u_count = static_cast<int>(v_u.size());
      }
    }
  }

  if (cfg.experiment == Experiment::entropy_table || cfg.experiment == Experiment::riemann) {
    const double g = cfg.constitutive.gamma();
    if (g > 3.0) R.issues.push_back("entropy kernels and the Riemann oracle need gamma <= 3");
  }
  if (!R.issues.empty()) throw SchemaError(R.issues);
  cfg.sweep.base = cfg.constitutive;
  if (!root["sweep"] || !root["sweep"]["delta"]) cfg.sweep.delta_rule = cfg.constitutive.delta_rule;
  cfg.sweep.solver = cfg.solver;
  return cfg;
}

}  // namespace nsklab
