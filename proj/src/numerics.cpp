#include "dlcda/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace dlcda {

void require_finite(const Matrix& M, const char* what) {
  if (!M.allFinite()) {
    throw NonFiniteValue(std::string(what) + " contains a non-finite value");
  }
}

void require_symmetric(const Matrix& M, const char* what, double tol) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatch(std::string(what) + " is not square (" +
                            std::to_string(M.rows()) + "x" +
                            std::to_string(M.cols()) + ")");
  }
  const double scale = std::max(1.0, M.size() > 0 ? M.cwiseAbs().maxCoeff() : 0.0);
  const double asym =
      M.size() > 0 ? (M - M.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > tol * scale) {
    throw NotSymmetric(std::string(what) + " is not symmetric (max asymmetry " +
                       std::to_string(asym) + ")");
  }
}

Matrix solve_spd(const Matrix& S, const Matrix& B) {
  require_symmetric(S, "solve_spd: S");
  require_finite(S, "solve_spd: S");
  require_finite(B, "solve_spd: B");
  if (S.rows() != B.rows()) {
    throw DimensionMismatch("solve_spd: S is " + std::to_string(S.rows()) +
                            "x" + std::to_string(S.cols()) + " but B has " +
                            std::to_string(B.rows()) + " rows");
  }
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("solve_spd: S is not positive-definite");
  }
  Matrix X = llt.solve(B);
  // One round of iterative refinement keeps the residual near machine level
  // even for moderately ill-conditioned systems.
  X += llt.solve(B - S * X);
  return X;
}

EigenPairs sym_geig_smallest(const Matrix& S, const Matrix& B, Index k,
                             double ridge) {
  require_symmetric(S, "sym_geig_smallest: S");
  require_symmetric(B, "sym_geig_smallest: B");
  require_finite(S, "sym_geig_smallest: S");
  require_finite(B, "sym_geig_smallest: B");
  const Index d = S.rows();
  if (B.rows() != d) {
    throw DimensionMismatch("sym_geig_smallest: S is " + std::to_string(d) +
                            "x" + std::to_string(d) + " but B is " +
                            std::to_string(B.rows()) + "x" +
                            std::to_string(B.cols()));
  }
  if (k < 1 || k > d) {
    throw DimensionMismatch("sym_geig_smallest: k = " + std::to_string(k) +
                            " is outside [1, " + std::to_string(d) + "]");
  }
  if (!(ridge >= 0.0)) {
    throw Error("sym_geig_smallest: ridge must be nonnegative");
  }

  Matrix Bp = B;
  Bp.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(Bp);
  if (llt.info() != Eigen::Success) {
    throw SingularPencil(
        "sym_geig_smallest: B + ridge*I is not positive-definite; "
        "increase the ridge");
  }

  // Reduce to a standard symmetric problem: C = L^-1 S L^-T.
  const auto L = llt.matrixL();
  Matrix W = L.solve(S);
  Matrix C = L.solve(W.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(C);
  if (es.info() != Eigen::Success) {
    throw Error("sym_geig_smallest: eigensolver failed to converge");
  }

  EigenPairs out;
  out.values = es.eigenvalues().head(k);
  // Back-transform a = L^-T y; orthonormal y makes a (B + ridge*I)-orthonormal.
  out.vectors = llt.matrixU().solve(es.eigenvectors().leftCols(k));

  // Fix the sign of each eigenvector: largest-magnitude entry positive,
  // first occurrence winning ties.
  for (Index j = 0; j < k; ++j) {
    Index at = 0;
    double best = -1.0;
    for (Index i = 0; i < d; ++i) {
      const double a = std::abs(out.vectors(i, j));
      if (a > best) {
        best = a;
        at = i;
      }
    }
    if (out.vectors(at, j) < 0.0) {
      out.vectors.col(j) = -out.vectors.col(j);
    }
  }
  return out;
}

double l21_norm(const Matrix& M) {
  double sum = 0.0;
  for (Index i = 0; i < M.rows(); ++i) {
    sum += M.row(i).norm();
  }
  return sum;
}

}  // namespace dlcda
