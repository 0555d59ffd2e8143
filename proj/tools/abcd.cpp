#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "abcd/cli.hpp"

int main(int argc, char** argv) {
  using abcd::cli::Command;
  abcd::cli::RunConfig config;
  std::string mode = "consistent";

  CLI::App app{"Sparse block row-projection solver with orthogonalizing augmentation"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", config.threads, "worker threads (0: ABCD_THREADS or all cores)");
    sub->add_option("--report", config.report, "write the JSON report here instead of stdout");
  };
  const auto add_matrix = [&](CLI::App* sub) {
    sub->add_option("--matrix", config.matrix, "Matrix Market coordinate file")->required();
    sub->add_option("--mode", mode, "consistent | least-squares")
        ->check(CLI::IsMember({"consistent", "least-squares"}));
  };

  auto* reorder = app.add_subcommand("reorder", "Cuthill-McKee reordering and block structure");
  add_matrix(reorder);
  add_common(reorder);
  reorder->add_option("--output", config.output, "write the reordered matrix (Matrix Market)");

  auto* augment = app.add_subcommand("augment", "build Abar = [A Gamma]");
  add_matrix(augment);
  add_common(augment);
  augment->add_option("--output", config.output, "write Abar (Matrix Market) and a .json sidecar");

  auto* solve = app.add_subcommand("solve", "solve Ax = b or min ||Ax - b||");
  add_matrix(solve);
  add_common(solve);
  solve->add_option("--rhs", config.rhs, "Matrix Market vector")->required();
  solve->add_option("--solution", config.solution, "write x (Matrix Market array)");
  solve->add_option("--consistency-tol", config.consistency_tolerance, "relative residual that triggers a warning");
  solve->add_option("--schur-cond-limit", config.schur_condition_limit, "largest accepted condition estimate of S");
  solve->add_flag("--strict", config.strict, "exit 1 on a consistency warning");
  solve->add_flag("--no-timings", config.omit_timings, "leave timings out of the report");

  auto* check = app.add_subcommand("check", "run the randomized property suites");
  add_common(check);
  check->add_option("--seed", config.seed, "random seed");
  check->add_option("--algebra-tol", config.algebra_tolerance, "tolerance of the Penrose/Schur/projector checks");
  check->add_option("--identity-tol", config.identity_tolerance, "rank tolerance of the rank identities");
  check->add_option("--probe-tol", config.probe_tolerance, "rank tolerance of the probe");
  check->add_option("--dense-cap", config.dense_cap, "largest densified matrix (entries)");

  auto* probe = app.add_subcommand("probe", "rank report on S for one matrix");
  add_matrix(probe);
  add_common(probe);
  probe->add_option("--probe-tol", config.probe_tolerance, "rank tolerance");
  probe->add_option("--dense-cap", config.dense_cap, "largest densified matrix (entries)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : abcd::cli::kExitInput;
  }

  if (reorder->parsed()) config.command = Command::kReorder;
  if (augment->parsed()) config.command = Command::kAugment;
  if (solve->parsed()) config.command = Command::kSolve;
  if (check->parsed()) config.command = Command::kCheck;
  if (probe->parsed()) config.command = Command::kProbe;
  config.mode = abcd::parse_mode(mode);
  return abcd::cli::run(config, std::cout, std::cerr);
}
