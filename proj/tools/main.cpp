#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace nslab::app;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nslab: pseudo-spectral Navier-Stokes laboratory"};
  app.require_subcommand(1);

  Overrides ov;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory (env NSLAB_OUT)");
    cmd->add_option("--seed", seed, "Seed of random initial data (env NSLAB_SEED)");
    cmd->add_option("--threads", threads, "Parallel ladder entries (env NSLAB_THREADS)")->check(CLI::PositiveNumber);
  };

  std::string config;
  bool resume = false;
  auto* run = app.add_subcommand("run", "Solve a configured problem and run its monitors");
  run->add_option("--config", config, "Run configuration (JSON)")->required();
  run->add_flag("--resume", resume, "Continue from the snapshots in the output directory");
  common(run);

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "Run the property suites with fixed seeds");
  check->add_option("suite", suite, "projector | calculus | inequalities | identities | all")
      ->check(CLI::IsMember(check_suites()));

  std::string dt_list, n_list;
  double expect = 0.0, tol = 0.1;
  auto* conv = app.add_subcommand("convergence", "Refinement ladder with a fitted order");
  conv->add_option("--config", config, "Run configuration (JSON)")->required();
  auto* dt_opt = conv->add_option("--dt", dt_list, "Comma-separated time steps");
  auto* n_opt = conv->add_option("--n", n_list, "Comma-separated grid sizes");
  dt_opt->excludes(n_opt);
  auto* expect_opt = conv->add_option("--expect-order", expect, "Fail unless the fitted order is within tolerance");
  conv->add_option("--order-tolerance", tol, "Tolerance of --expect-order");
  common(conv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  auto apply_common = [&](CLI::App* cmd) {
    if (cmd->count("--out")) ov.out = out_dir;
    if (cmd->count("--seed")) ov.seed = seed;
    if (cmd->count("--threads")) ov.threads = threads;
  };

  if (*run) {
    apply_common(run);
    ov.resume = resume;
    return cmd_run(config, ov, std::cout, std::cerr);
  }
  if (*check) return cmd_check(suite, std::cout, std::cerr);

  apply_common(conv);
  std::vector<double> ladder;
  LadderKind kind = LadderKind::dt;
  try {
    if (!dt_list.empty()) {
      ladder = parse_list(dt_list);
    } else if (!n_list.empty()) {
      ladder = parse_list(n_list);
      kind = LadderKind::n;
    } else {
      std::cerr << "convergence: give --dt or --n\n";
      return kExitConfigError;
    }
  } catch (const std::exception&) {
    std::cerr << "convergence: ladder values must be comma-separated numbers\n";
    return kExitConfigError;
  }
  std::optional<double> expect_order;
  if (expect_opt->count()) expect_order = expect;
  return cmd_convergence(config, kind, ladder, ov, expect_order, tol, std::cout, std::cerr);
}
