#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "abcd/oracle.hpp"
#include "abcd/pipeline.hpp"

namespace abcd::cli {

enum class Command { kReorder, kAugment, kSolve, kCheck, kProbe };

std::string to_string(Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  Command command = Command::kSolve;
  std::filesystem::path matrix;
  std::filesystem::path rhs;
  SolveMode mode = SolveMode::kConsistent;
  /// JSON report destination; empty writes to the output stream.
  std::filesystem::path report;
  /// reorder: reordered matrix; augment: Abar (Matrix Market).
  std::filesystem::path output;
  /// solve: solution vector (Matrix Market array).
  std::filesystem::path solution;
  unsigned threads = 0;
  Index dense_cap = oracle::kDefaultDenseCap;
  double consistency_tolerance = 1e-8;
  double schur_condition_limit = 1e12;
  double probe_tolerance = oracle::kProbeTolerance;
  double algebra_tolerance = 1e-10;
  double identity_tolerance = oracle::kIdentityTolerance;
  std::uint64_t seed = 20240601;
  /// Leave phase timings out of the report so reruns compare byte for byte.
  bool omit_timings = false;
  /// Turn a consistency warning into exit code 1.
  bool strict = false;
};

/// Throws std::invalid_argument describing the first problem found.
void validate(const RunConfig& config);

/// Runs one command. Reports go to `config.report` or `out`; diagnostics go
/// to `err`. Returns 0 on success, 1 on numerical failure, 2 on bad input.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace abcd::cli
