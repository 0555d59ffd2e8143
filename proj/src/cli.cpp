#include "abcd/cli.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "abcd/checks.hpp"
#include "abcd/errors.hpp"
#include "abcd/matrix_market.hpp"
#include "abcd/reorder.hpp"

namespace abcd::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(std::span<const Index> v) { return Json(std::vector<Index>(v.begin(), v.end())); }

SolverOptions solver_options(const RunConfig& config) {
  SolverOptions o;
  o.threads = config.threads;
  o.consistency_tolerance = config.consistency_tolerance;
  o.schur_condition_limit = config.schur_condition_limit;
  return o;
}

void emit(const RunConfig& config, const Json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (config.report.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.report, std::ios::binary);
  if (!file) throw IoError("cannot write " + config.report.string());
  file << text;
  if (!file) throw IoError("failed writing " + config.report.string());
}

Json timings_json(const PhaseTimings& t) {
  return Json{{"reorder", t.reorder}, {"augment", t.augment}, {"factor", t.factor}, {"schur", t.schur},
              {"solve", t.solve}};
}

int run_reorder(const RunConfig& config, std::ostream& out) {
  const SparseMatrix a = read_matrix_market(config.matrix);
  const Pipeline p = Pipeline::prepare(a, config.mode, solver_options(config));
  const auto& blocks = p.blocks();
  Json levels = Json::array();
  for (const auto& level : p.levels().levels) {
    levels.push_back(Json{{"kind", level.kind == NodeKind::kRow ? "row" : "column"},
                          {"component", level.component},
                          {"size", level.nodes.size()}});
  }
  const bool structured = config.mode == SolveMode::kConsistent ? is_block_bidiagonal(p.reordered(), blocks)
                                                                : is_block_tridiagonal(p.reordered(), blocks);
  Json report{{"mode", to_string(config.mode)},
              {"m", a.rows()},
              {"n", a.cols()},
              {"components", p.levels().components()},
              {"levels", levels},
              {"levelsAlternate", levels_alternate(p.levels())},
              {"levelsCover", levels_cover(p.levels())},
              {"structure", config.mode == SolveMode::kConsistent ? "block-bidiagonal" : "block-tridiagonal"},
              {"structureCheck", structured},
              {"rowOffsets", to_json(std::span<const Index>(blocks.row_offsets))},
              {"colOffsets", to_json(std::span<const Index>(blocks.col_offsets))},
              {"rowPermutation", to_json(p.row_permutation().forward())},
              {"colPermutation", to_json(p.col_permutation().forward())}};
  if (!config.output.empty()) write_matrix_market(config.output, p.reordered());
  emit(config, report, out);
  return structured ? kExitOk : kExitNumerical;
}

int run_augment(const RunConfig& config, std::ostream& out) {
  const SparseMatrix a = read_matrix_market(config.matrix);
  const Pipeline p = Pipeline::prepare(a, config.mode, solver_options(config));
  const auto& sys = p.augmented();
  Json report{{"mode", to_string(config.mode)},
              {"m", a.rows()},
              {"n", a.cols()},
              {"p", sys.row_blocks()},
              {"q", sys.q},
              {"rows", sys.rows()},
              {"cols", sys.cols()},
              {"rowOffsets", to_json(std::span<const Index>(sys.row_offsets))},
              {"signs", sys.signs},
              {"orthogonalityError", orthogonality_error(sys)},
              {"maxBlockFrobenius", max_block_frobenius(sys)}};
  RunConfig effective = config;
  if (!config.output.empty()) {
    write_matrix_market(config.output, sys.abar);
    if (effective.report.empty()) effective.report = config.output.string() + ".json";
  }
  emit(effective, report, out);
  return kExitOk;
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const SparseMatrix a = read_matrix_market(config.matrix);
  const Vector b = read_vector_market(config.rhs);
  const Pipeline p = Pipeline::build(a, config.mode, solver_options(config));
  const SolveReport r = p.solve(b);
  Json report{{"mode", to_string(config.mode)},
              {"m", a.rows()},
              {"n", a.cols()},
              {"p", r.p},
              {"q", r.q},
              {"residualNorm", r.residual_norm},
              {"normalResidual", r.normal_residual},
              {"yNorm", r.y_norm},
              {"orthogonalityError", r.orthogonality_error},
              {"sConditionEstimate", r.s_condition_estimate}};
  if (config.mode == SolveMode::kConsistent) {
    report["consistencyWarning"] = r.consistency_warning;
  } else {
    report["residualMismatch"] = r.residual_mismatch;
  }
  if (!config.omit_timings) report["timings"] = timings_json(r.timings);
  report["x"] = to_json(r.x);
  if (config.mode == SolveMode::kLeastSquares) report["r"] = to_json(r.r);
  if (!config.solution.empty()) write_vector_market(config.solution, r.x);
  emit(config, report, out);
  if (r.consistency_warning && config.mode == SolveMode::kConsistent) {
    err << "warning: residual " << r.residual_norm << " exceeds " << config.consistency_tolerance
        << " * ||b||; the system may be inconsistent\n";
    if (config.strict) return kExitNumerical;
  }
  return kExitOk;
}

int run_check(const RunConfig& config, std::ostream& out) {
  verify::CheckOptions options;
  options.seed = config.seed;
  options.threads = config.threads;
  options.algebra_tolerance = config.algebra_tolerance;
  options.identity_tolerance = config.identity_tolerance;
  options.probe_tolerance = config.probe_tolerance;
  options.dense_cap = config.dense_cap;
  bool all = true;
  Json suites = Json::array();
  for (const auto& s : verify::run_all(options)) {
    all = all && s.passed();
    suites.push_back(Json{{"name", s.name},
                          {"cases", s.cases},
                          {"failures", s.failures},
                          {"worst", s.worst},
                          {"passed", s.passed()},
                          {"observations", s.observations}});
  }
  emit(config, Json{{"seed", config.seed}, {"passed", all}, {"suites", suites}}, out);
  return all ? kExitOk : kExitNumerical;
}

int run_probe(const RunConfig& config, std::ostream& out) {
  const SparseMatrix a = read_matrix_market(config.matrix);
  const Pipeline p = Pipeline::prepare(a, config.mode, solver_options(config));
  const auto probe = oracle::conjecture_probe(p.augmented(), config.dense_cap, config.probe_tolerance);
  emit(config,
       Json{{"mode", to_string(config.mode)},
            {"m", probe.m},
            {"q", probe.q},
            {"rankAbar", probe.rank_abar},
            {"intersectionDim", probe.intersection_dim},
            {"wRank", probe.w_rank},
            {"sRank", probe.s_rank},
            {"chainHolds", probe.chain_holds},
            {"rankDeficient", probe.rank_deficient},
            {"sSingular", probe.s_singular},
            {"converseCandidate", probe.converse_candidate},
            {"observation", probe.observation}},
       out);
  return kExitOk;
}

void require_file(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw std::invalid_argument(std::string(flag) + " is required");
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::kReorder: return "reorder";
    case Command::kAugment: return "augment";
    case Command::kSolve: return "solve";
    case Command::kCheck: return "check";
    case Command::kProbe: return "probe";
  }
  return "unknown";
}

void validate(const RunConfig& config) {
  if (config.command != Command::kCheck) require_file(config.matrix, "--matrix");
  if (config.command == Command::kSolve) require_file(config.rhs, "--rhs");
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(config.consistency_tolerance, "consistency tolerance");
  positive(config.schur_condition_limit, "Schur condition limit");
  positive(config.probe_tolerance, "probe tolerance");
  positive(config.algebra_tolerance, "algebra tolerance");
  positive(config.identity_tolerance, "identity tolerance");
  if (config.dense_cap <= 0) throw std::invalid_argument("dense cap must be positive");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string where = "abcd " + to_string(config.command) + ": ";
  try {
    validate(config);
    for (const auto* path : {&config.matrix, &config.rhs}) {
      if (!path->empty() && !std::filesystem::is_regular_file(*path)) {
        throw IoError("cannot read " + path->string());
      }
    }
    switch (config.command) {
      case Command::kReorder: return run_reorder(config, out);
      case Command::kAugment: return run_augment(config, out);
      case Command::kSolve: return run_solve(config, out, err);
      case Command::kCheck: return run_check(config, out);
      case Command::kProbe: return run_probe(config, out);
    }
    return kExitInput;
  } catch (const IoError& e) {
    err << where << e.what() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << where << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DimensionError& e) {
    err << where << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << where << e.what() << "\n";
    return kExitInput;
  } catch (const SingularSchur& e) {
    err << where << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << where << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace abcd::cli
