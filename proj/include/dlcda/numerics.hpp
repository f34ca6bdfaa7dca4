#pragma once

#include <Eigen/Dense>

#include "dlcda/errors.hpp"

namespace dlcda {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Result of a generalized symmetric eigensolve: `vectors` holds one
/// eigenvector per column, `values` the matching eigenvalues in
/// ascending order.
struct EigenPairs {
  Matrix vectors;
  Vector values;
};

/// Throws NonFiniteValue if `M` contains a NaN or infinity.
void require_finite(const Matrix& M, const char* what);

/// Throws NotSymmetric if max|M - M^T| > tol * max(1, max|M|).
void require_symmetric(const Matrix& M, const char* what, double tol = 1e-10);

/// Solves S * X = B for symmetric positive-definite S via Cholesky,
/// with one step of iterative refinement. Throws NotPositiveDefinite
/// if the factorization hits a non-positive pivot.
Matrix solve_spd(const Matrix& S, const Matrix& B);

/// Returns the k algebraically smallest eigenpairs of the pencil
///   S a = lambda (B + ridge*I) a
/// for symmetric S and symmetric positive-semidefinite B, computed by
/// reducing to a standard problem through the Cholesky factor of
/// B + ridge*I. Eigenvectors are (B + ridge*I)-orthonormal and each is
/// signed so that its largest-magnitude entry is positive (first such
/// entry on ties). Throws SingularPencil when B + ridge*I is not
/// positive-definite.
EigenPairs sym_geig_smallest(const Matrix& S, const Matrix& B, Index k,
                             double ridge);

/// l2,1 norm: sum of Euclidean norms of the rows of M.
double l21_norm(const Matrix& M);

}  // namespace dlcda
