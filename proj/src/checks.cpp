#include "abcd/checks.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "abcd/errors.hpp"
#include "abcd/pipeline.hpp"
#include "abcd/random.hpp"

namespace abcd::verify {

namespace {

using random::Engine;

Index uniform_index(Engine& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

double relative(double err, double scale) { return scale > 0.0 ? err / scale : err; }

double penrose_error(const DenseMatrix& m, const DenseMatrix& x) {
  const DenseMatrix mx = m * x;
  const DenseMatrix xm = x * m;
  return std::max({relative((mx * m - m).norm(), m.norm()), relative((xm * x - x).norm(), x.norm()),
                   relative((mx.transpose() - mx).norm(), std::max(1.0, mx.norm())),
                   relative((xm.transpose() - xm).norm(), std::max(1.0, xm.norm()))});
}

DenseMatrix columns_of(Index rows, Index cols, const auto& apply) {
  DenseMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    Vector e = Vector::Zero(cols);
    e[j] = 1.0;
    out.col(j) = apply(e);
  }
  return out;
}

// Solvable instance for the block solver: full row rank for the consistent
// path, full column rank for the least-squares path.
Pipeline solvable_instance(Engine& rng, Index c, const CheckOptions& options) {
  SolverOptions so;
  so.threads = options.threads;
  const double density = std::uniform_real_distribution<double>(0.1, 0.4)(rng);
  if (c % 2 == 0) {
    const Index m = uniform_index(rng, 2, 12);
    const Index n = uniform_index(rng, m, m + 8);
    return Pipeline::build(random::full_row_rank(rng, m, n, density), SolveMode::kConsistent, so);
  }
  const Index n = uniform_index(rng, 1, 8);
  const Index m = uniform_index(rng, n, n + 8);
  return Pipeline::build(random::full_column_rank(rng, m, n, density), SolveMode::kLeastSquares, so);
}

template <typename Case>
SuiteResult run_suite(std::string name, Index cases, std::uint64_t seed, Case&& one) {
  SuiteResult out;
  out.name = std::move(name);
  Engine rng(seed);
  for (Index c = 0; c < cases; ++c) {
    ++out.cases;
    try {
      const double err = one(rng, c, out);
      out.worst = std::max(out.worst, err);
    } catch (const std::exception& e) {
      ++out.failures;
      out.observations.push_back("case " + std::to_string(c) + ": " + e.what());
    }
  }
  return out;
}

void expect(SuiteResult& out, Index c, bool ok, const std::string& what) {
  if (ok) return;
  ++out.failures;
  out.observations.push_back("case " + std::to_string(c) + ": " + what);
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

SuiteResult penrose_suite(const CheckOptions& options, Index cases) {
  return run_suite("penrose", cases, options.seed, [&](Engine& rng, Index c, SuiteResult& out) {
    const Index rows = uniform_index(rng, 1, 8);
    const Index cols = uniform_index(rng, 1, 8);
    DenseMatrix m;
    switch (c % 3) {
      case 0:
        m.resize(rows, cols);
        for (Index j = 0; j < cols; ++j) m.col(j) = random::uniform_vector(rng, rows);
        break;
      case 1: {
        const Index rank = uniform_index(rng, 0, std::min(rows, cols));
        DenseMatrix left(rows, rank);
        DenseMatrix right(rank, cols);
        for (Index j = 0; j < rank; ++j) left.col(j) = random::uniform_vector(rng, rows);
        for (Index j = 0; j < cols; ++j) right.col(j) = random::uniform_vector(rng, rank);
        m = left * right;
        break;
      }
      default:
        m = random::integer_low_rank(rng, rows, cols, uniform_index(rng, 1, std::min(rows, cols)));
    }
    const double err = penrose_error(m, oracle::dense_pinv(m));
    expect(out, c, err <= options.algebra_tolerance, "Penrose error " + fmt(err));
    return err;
  });
}

SuiteResult rank_join_suite(const CheckOptions& options, Index cases) {
  return run_suite("rank-join", cases, options.seed + 1, [&](Engine& rng, Index c, SuiteResult& out) {
    const Index rows = uniform_index(rng, 1, 6);
    const Index ce = uniform_index(rng, 1, 5);
    const Index cf = uniform_index(rng, 1, 5);
    DenseMatrix e = c % 2 == 0 ? random::integer_matrix(rng, rows, ce)
                               : random::integer_low_rank(rng, rows, ce, uniform_index(rng, 1, std::min(rows, ce)));
    DenseMatrix f = random::integer_matrix(rng, rows, cf);
    // Reuse columns of E in F now and then so R(E) and R(F) overlap.
    if (c % 3 == 0) f.col(0) = e.col(0) - e.col(ce - 1);
    const auto check = oracle::rank_join_identity(e, f, options.identity_tolerance);
    expect(out, c, check.holds,
           "rank([E F]) = " + std::to_string(check.lhs) + " but rhs = " + std::to_string(check.rhs));
    return 0.0;
  });
}

SuiteResult rank_product_suite(const CheckOptions& options, Index cases) {
  return run_suite("rank-product", cases, options.seed + 2, [&](Engine& rng, Index c, SuiteResult& out) {
    const Index tau = uniform_index(rng, 1, 6);
    const Index mu = uniform_index(rng, 1, 6);
    const Index delta = uniform_index(rng, 1, 6);
    DenseMatrix e = c % 2 == 0 ? random::integer_matrix(rng, tau, mu)
                               : random::integer_low_rank(rng, tau, mu, uniform_index(rng, 1, std::min(tau, mu)));
    DenseMatrix f = c % 3 == 0 ? random::integer_matrix(rng, mu, delta)
                               : random::integer_low_rank(rng, mu, delta, uniform_index(rng, 1, std::min(mu, delta)));
    const auto check = oracle::rank_product_identity(e, f, options.identity_tolerance);
    expect(out, c, check.holds,
           "rank(EF) = " + std::to_string(check.lhs) + " but rhs = " + std::to_string(check.rhs));
    return 0.0;
  });
}

SuiteResult stacked_penrose_suite(const CheckOptions& options, Index cases) {
  return run_suite("stacked-penrose", cases, options.seed + 3, [&](Engine& rng, Index c, SuiteResult& out) {
    const Pipeline p = solvable_instance(rng, c, options);
    const auto& solver = p.solver();
    const Index rows = solver.system().rows() + solver.q();
    const Index cols = solver.system().cols();
    DenseMatrix stacked(rows, cols);
    stacked.topRows(solver.system().rows()) = solver.system().abar.to_dense();
    for (Index j = 0; j < cols; ++j) {
      Vector e = Vector::Zero(cols);
      e[j] = 1.0;
      stacked.col(j).tail(solver.q()) = solver.apply_w(e);
    }
    const DenseMatrix pinv = columns_of(cols, rows, [&](const Vector& e) { return solver.apply_stacked_pinv(e); });
    const double err = penrose_error(stacked, pinv);
    expect(out, c, err <= options.algebra_tolerance, "Penrose error " + fmt(err));
    return err;
  });
}

SuiteResult schur_identity_suite(const CheckOptions& options, Index cases) {
  return run_suite("schur-identity", cases, options.seed + 4, [&](Engine& rng, Index c, SuiteResult& out) {
    const Pipeline p = solvable_instance(rng, c, options);
    const auto& solver = p.solver();
    const Index n = solver.n();
    const Index q = solver.q();
    const DenseMatrix w = columns_of(q, n + q, [&](const Vector& e) { return solver.apply_w(e); });
    const DenseMatrix b = w.leftCols(n);
    const DenseMatrix s = w.rightCols(q);
    const DenseMatrix& assembled = solver.schur().matrix();
    const double scale = std::max(1.0, assembled.norm());
    const double err = std::max({(w * w.transpose() - assembled).norm(),
                                 (b * b.transpose() + s * s - assembled).norm(), (s - assembled).norm()}) /
                       scale;
    expect(out, c, err <= options.algebra_tolerance, "Schur identity error " + fmt(err));
    return err;
  });
}

SuiteResult projector_suite(const CheckOptions& options, Index cases) {
  return run_suite("projector", cases, options.seed + 5, [&](Engine& rng, Index c, SuiteResult& out) {
    const Pipeline p = solvable_instance(rng, c, options);
    const auto& solver = p.solver();
    const Index cols = solver.system().cols();
    const DenseMatrix proj = columns_of(cols, cols, [&](const Vector& e) {
      return apply_projector(solver.factorization(), e, options.threads);
    });
    const DenseMatrix abar = solver.system().abar.to_dense();
    const double scale = std::max(1.0, proj.norm());
    const double err = std::max({(proj * proj - proj).norm(), (proj.transpose() - proj).norm(),
                                 (proj - oracle::dense_pinv(abar) * abar).norm()}) /
                       scale;
    expect(out, c, err <= options.algebra_tolerance, "projector error " + fmt(err));
    return err;
  });
}

SuiteResult full_rank_schur_suite(const CheckOptions& options, Index cases) {
  return run_suite("full-rank-schur", cases, options.seed + 6, [&](Engine& rng, Index c, SuiteResult& out) {
    const Index m = uniform_index(rng, 2, 30);
    const Index n = uniform_index(rng, m, m + 20);
    const double density = std::uniform_real_distribution<double>(0.05, 0.3)(rng);
    SolverOptions so;
    so.threads = options.threads;
    const Pipeline p = Pipeline::build(random::full_row_rank(rng, m, n, density), SolveMode::kConsistent, so);
    const auto& schur = p.solver().schur();
    const double low = schur.size() == 0
                           ? 1.0
                           : Eigen::SelfAdjointEigenSolver<DenseMatrix>(schur.matrix(), Eigen::EigenvaluesOnly)
                                 .eigenvalues()[0];
    expect(out, c, schur.cholesky() && low > 0.0, "S not positive definite, smallest eigenvalue " + fmt(low));
    const auto probe = oracle::conjecture_probe(p.augmented(), options.dense_cap, options.probe_tolerance);
    expect(out, c, probe.intersection_dim == 0 && probe.s_rank == probe.q,
           "probe disagrees: " + probe.observation);
    return 0.0;
  });
}

SuiteResult probe_suite(const CheckOptions& options, Index cases) {
  Index singular = 0;
  Index converse = 0;
  auto out = run_suite("probe", cases, options.seed + 7, [&](Engine& rng, Index c, SuiteResult& out) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const Index m = uniform_index(rng, 3, 9);
      const Index n = uniform_index(rng, 2, 8);
      const Index rank = uniform_index(rng, 1, std::min(m, n) - 1);
      const DenseMatrix dense = random::integer_low_rank(rng, m, n, rank);
      // Zero rows or columns make Abar rank deficient for a trivial reason.
      if ((dense.rowwise().squaredNorm().array() == 0.0).any() ||
          (dense.colwise().squaredNorm().array() == 0.0).any()) {
        continue;
      }
      const SparseMatrix a = SparseMatrix::from_dense(dense);
      const Pipeline p = Pipeline::prepare(a, SolveMode::kConsistent);
      const auto probe = oracle::conjecture_probe(p.augmented(), options.dense_cap, options.probe_tolerance);
      if (!probe.rank_deficient) continue;
      if (probe.s_singular) ++singular;
      if (probe.converse_candidate) ++converse;
      out.observations.push_back("case " + std::to_string(c) + " (" + std::to_string(m) + "x" + std::to_string(n) +
                                 ", rank(A)<=" + std::to_string(rank) + "): " + probe.observation);
      expect(out, c, probe.chain_holds, "rank chain broken");
      return 0.0;
    }
    throw Error("no rank-deficient Abar found");
  });
  out.observations.push_back("summary: S singular on " + std::to_string(singular) + " of " +
                             std::to_string(out.cases) + " rank-deficient instances; " + std::to_string(converse) +
                             " converse candidates");
  return out;
}

std::vector<SuiteResult> run_all(const CheckOptions& options) {
  return {penrose_suite(options),         rank_join_suite(options),  rank_product_suite(options),
          stacked_penrose_suite(options), schur_identity_suite(options), projector_suite(options),
          full_rank_schur_suite(options),          probe_suite(options)};
}

}  // namespace abcd::verify
