#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nsklab/cli.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "experiment config (YAML)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads (default: NSKLAB_THREADS or all cores)");
  cmd->add_option("--seed", o.seed, "random seed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nsklab::Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsklab: Navier-Stokes-Korteweg vanishing-limit experiments"};
  app.require_subcommand(1);
  Options o;
  nsklab::Experiment chosen = nsklab::Experiment::conditions;

  auto leaf = [&](CLI::App* cmd, nsklab::Experiment e) {
    add_common(cmd, o);
    cmd->callback([&chosen, e] { chosen = e; });
  };
  leaf(app.add_subcommand("simulate", "run the NSK solver"), nsklab::Experiment::simulate);
  leaf(app.add_subcommand("sweep", "vanishing eps sweep against the Euler oracle"), nsklab::Experiment::sweep);
  auto* coerc = app.add_subcommand("coercivity", "coercivity experiments");
  coerc->require_subcommand(1);
  leaf(coerc->add_subcommand("scan", "adversarial (alpha, beta) scan"), nsklab::Experiment::coercivity_scan);
  auto* sob = app.add_subcommand("sobolev", "weighted Sobolev inequality experiments");
  sob->require_subcommand(1);
  leaf(sob->add_subcommand("test", "random and extremizer profiles"), nsklab::Experiment::sobolev_test);
  leaf(app.add_subcommand("riemann", "exact Euler Riemann solution"), nsklab::Experiment::riemann);
  auto* ent = app.add_subcommand("entropy", "entropy pair tools");
  ent->require_subcommand(1);
  leaf(ent->add_subcommand("table", "tabulate an entropy pair"), nsklab::Experiment::entropy_table);
  leaf(app.add_subcommand("conditions", "check structural conditions"), nsklab::Experiment::conditions);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  nsklab::ExperimentConfig cfg;
  try {
    cfg = nsklab::parse_config(o.config.empty() ? std::string{} : read_file(o.config));
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  cfg.experiment = chosen;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  nsklab::DispatchContext ctx;
  ctx.out_dir = o.out.empty() ? cfg.output : o.out;
  ctx.threads = nsklab::resolve_threads(o.threads > 0 ? o.threads : cfg.threads);
  return nsklab::dispatch(cfg, ctx);
}
