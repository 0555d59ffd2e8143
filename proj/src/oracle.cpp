#include "abcd/oracle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "abcd/errors.hpp"

namespace abcd::oracle {

namespace {

double resolve_tolerance(const DenseMatrix& m, const Vector& sv, double tolerance) {
  if (tolerance >= 0.0) return tolerance;
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  return static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon() * top;
}

Index count_above(const Vector& sv, double tol) {
  Index r = 0;
  while (r < sv.size() && sv[r] > tol) ++r;
  return r;
}

// Rank with a tolerance relative to max(1, sigma_max).
Index relative_rank(const DenseMatrix& m, double relative) {
  if (m.size() == 0) return 0;
  const Vector sv = Eigen::BDCSVD<DenseMatrix>(m).singularValues();
  return count_above(sv, relative * std::max(1.0, sv[0]));
}

}  // namespace

RankReport numerical_rank(const DenseMatrix& m, double tolerance) {
  RankReport out;
  if (m.size() == 0) return out;
  out.singular_values = Eigen::BDCSVD<DenseMatrix>(m).singularValues();
  out.tolerance = resolve_tolerance(m, out.singular_values, tolerance);
  out.rank = count_above(out.singular_values, out.tolerance);
  return out;
}

DenseMatrix dense_pinv(const DenseMatrix& m, double tolerance) {
  if (m.size() == 0) return DenseMatrix::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error("dense_pinv: SVD did not converge");
  const Vector& sv = svd.singularValues();
  const Index r = count_above(sv, resolve_tolerance(m, sv, tolerance));
  const Vector inv = sv.head(r).cwiseInverse();
  return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

DenseMatrix range_basis(const DenseMatrix& m, double tolerance) {
  if (m.size() == 0) return DenseMatrix::Zero(m.rows(), 0);
  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeFullU);
  const Index r = count_above(svd.singularValues(), resolve_tolerance(m, svd.singularValues(), tolerance));
  return svd.matrixU().leftCols(r);
}

DenseMatrix null_space_basis(const DenseMatrix& m, double tolerance) {
  if (m.cols() == 0) return DenseMatrix::Zero(0, 0);
  if (m.rows() == 0) return DenseMatrix::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeFullV);
  const Index r = count_above(svd.singularValues(), resolve_tolerance(m, svd.singularValues(), tolerance));
  return svd.matrixV().rightCols(m.cols() - r);
}

Index intersection_dimension(const DenseMatrix& u, const DenseMatrix& v, double tolerance) {
  if (u.rows() != v.rows()) throw DimensionError("intersection_dimension: ambient dimensions differ");
  DenseMatrix joined(u.rows(), u.cols() + v.cols());
  joined << u, v;
  return numerical_rank(u, tolerance).rank + numerical_rank(v, tolerance).rank -
         numerical_rank(joined, tolerance).rank;
}

IdentityCheck rank_join_identity(const DenseMatrix& e, const DenseMatrix& f, double tolerance) {
  if (e.rows() != f.rows()) throw DimensionError("rank_join_identity: E and F need the same number of rows");
  DenseMatrix joined(e.rows(), e.cols() + f.cols());
  joined << e, f;
  const DenseMatrix complement = f - e * (dense_pinv(e) * f);
  IdentityCheck out;
  out.lhs = relative_rank(joined, tolerance);
  out.rhs = relative_rank(e, tolerance) + relative_rank(complement, tolerance);
  out.holds = out.lhs == out.rhs;
  return out;
}

IdentityCheck rank_product_identity(const DenseMatrix& e, const DenseMatrix& f, double tolerance) {
  if (e.cols() != f.rows()) throw DimensionError("rank_product_identity: inner dimensions differ");
  const auto rel = [&](const DenseMatrix& m) {
    if (m.size() == 0) return tolerance;
    return tolerance * std::max(1.0, Eigen::BDCSVD<DenseMatrix>(m).singularValues()[0]);
  };
  const DenseMatrix et = e.transpose();
  const DenseMatrix ft = f.transpose();
  const DenseMatrix row_space = range_basis(et, rel(et));
  const DenseMatrix kernel = null_space_basis(ft, rel(ft));
  IdentityCheck out;
  out.intersection = intersection_dimension(row_space, kernel, tolerance);
  out.lhs = relative_rank(e * f, tolerance);
  out.rhs = relative_rank(e, tolerance) - out.intersection;
  out.holds = out.lhs == out.rhs;
  return out;
}

ProbeReport conjecture_probe(const AugmentedSystem& system, Index dense_cap, double tolerance) {
  const Index m = system.rows();
  const Index nbar = system.cols();
  if (m * nbar > dense_cap) {
    throw CapacityError("conjecture_probe: " + std::to_string(m) + "x" + std::to_string(nbar) +
                        " exceeds the densification cap of " + std::to_string(dense_cap) + " entries");
  }
  const Index q = system.q;
  const DenseMatrix a = system.abar.to_dense();

  ProbeReport out;
  out.m = m;
  out.q = q;
  out.rank_abar = relative_rank(a, tolerance);

  DenseMatrix yt = DenseMatrix::Zero(nbar, q);
  yt.bottomRows(q).setIdentity();
  out.intersection_dim = intersection_dimension(yt, a.transpose(), tolerance * std::max(1.0, a.norm()));

  const DenseMatrix projector = dense_pinv(a) * a;
  const DenseMatrix w = (DenseMatrix::Identity(nbar, nbar) - projector).bottomRows(q);
  const DenseMatrix s = w.rightCols(q);
  out.w_rank = relative_rank(w, tolerance);
  out.s_rank = relative_rank(s, tolerance);

  out.chain_holds = out.s_rank == out.w_rank && out.w_rank == q - out.intersection_dim;
  out.rank_deficient = out.rank_abar >= 1 && out.rank_abar < m;
  out.s_singular = out.s_rank < q;
  out.converse_candidate = out.s_singular && out.rank_abar == m;

  std::ostringstream obs;
  obs << "rank(Abar)=" << out.rank_abar << "/" << m << ", dim(R(Y^T)∩R(Abar^T))=" << out.intersection_dim
      << ", rank(W)=" << out.w_rank << ", rank(S)=" << out.s_rank << "/" << q << "; ";
  if (out.rank_deficient) {
    obs << (out.intersection_dim >= 1 ? "rank-deficient Abar with a nontrivial intersection (S singular)"
                                      : "rank-deficient Abar with a trivial intersection (S invertible)");
  } else if (out.converse_candidate) {
    obs << "S singular while Abar has full row rank";
  } else {
    obs << (out.s_singular ? "S singular" : "S invertible");
  }
  out.observation = obs.str();
  return out;
}

}  // namespace abcd::oracle
