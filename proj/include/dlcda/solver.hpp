#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dlcda/data.hpp"
#include "dlcda/mmd.hpp"

namespace dlcda {

enum class Variant { full, dda, lcr };
enum class KernelKind { none, linear, rbf };

struct SolverConfig {
  int k = 100;             // embedding width (>= class count)
  double alpha = 1.0;      // Frobenius regularizer
  double beta = 1.1;       // row-sparsity regularizer
  int outer_iters = 10;    // alignment/label refinement rounds (T)
  int inner_iters = 10;    // projection refinement rounds per outer round (T1)
  double epsilon = 1e-8;   // smoothing inside row norms
  double tol = 1e-6;       // relative stop tolerance of the inner loop
  double ridge = 1e-9;     // pencil ridge, relative to trace(B)/dim
  Variant variant = Variant::full;
  KernelKind kernel = KernelKind::none;
  double gamma = 0.0;      // rbf width; <= 0 picks the median heuristic
};

struct ProjectionModel {
  Matrix basis;   // d x k (primal) or n x k (kernel)
  Vector offset;  // length k
  int k = 0;
};

struct IterationRecord {
  double objective = 0.0;
  std::optional<double> target_accuracy;  // only when truth labels exist
  std::vector<double> inner_objectives;
};

struct FittedModel {
  ProjectionModel projection;
  LabelMatrix label_matrix;            // source rows + relaxed target rows
  std::vector<int> target_predictions; // hard pseudo-labels, 1..C
  Matrix embedded;                     // k x (n_s + n_t), source columns first
  std::vector<IterationRecord> history;
  std::vector<std::string> warnings;
  int class_count = 0;
  double kernel_gamma = 0.0;  // width actually used when kernel == rbf
};

/// Snapshot passed to the observer after every outer iteration.
struct FitEvent {
  int iteration;  // 1-based
  const Matrix& projection;
  const Vector& offset;
  const LabelMatrix& labels;
  const Matrix& mstar;  // weight matrix this iteration optimized against
  const std::vector<double>& inner_objectives;
  double objective;
};
using FitObserver = std::function<void(const FitEvent&)>;

/// Initial projection: the k smallest generalized eigenvectors of
///   (X M0 X^T + alpha I) a = lambda (X H X^T) a,
/// H being the centering matrix. `ridge` is relative (see SolverConfig).
Matrix init_projection(const Matrix& X, const Matrix& m0, double alpha, int k,
                       double ridge);

/// Offset update e = (Y^T 1 - A^T X 1) / n.
Vector update_offset(const Matrix& X, const Matrix& A, const Matrix& Y);
inline Vector update_offset(const Matrix& X, const Matrix& A,
                            const LabelMatrix& Y) {
  return update_offset(X, A, Y.values);
}

/// Projection update: alternates the closed-form solve
///   A = (X H X^T + alpha I + X mstar X^T + beta G)^{-1} X H Y
/// with the row-weight refresh of G, until inner_iters rounds or the
/// smoothed objective stalls. The offset drops out of the centered
/// system, so `e` only participates in shape checks. Appends the
/// smoothed objective after every solve to `inner_objectives` when
/// given.
Matrix update_projection(const Matrix& X, const Matrix& Y, const Vector& e,
                         const Matrix& mstar, const SolverConfig& cfg,
                         std::vector<double>* inner_objectives = nullptr);

/// Label update: source rows are copied bit-identically from y_source;
/// every target row becomes the simplex-feasible relaxation of
/// v = A^T x_i + e (spread the slack (1 - sum v)/k evenly, then project
/// onto the simplex if anything went negative).
LabelMatrix update_labels(const Matrix& X, const Matrix& A, const Vector& e,
                          const LabelMatrix& y_source, int width);

/// Full objective: tr(A^T X mstar X^T A) + alpha ||A||_F^2
/// + beta (sum_j sqrt(||a^j||^2 + eps))^2 + ||X^T A - 1 e^T - Y||_F^2.
double objective(const Matrix& X, const Matrix& A, const Vector& e,
                 const Matrix& Y, const Matrix& mstar, double alpha,
                 double beta, double epsilon);

/// Inner-loop objective monitored by update_projection: same as
/// objective but with the offset eliminated through centering, i.e. the
/// regression term is ||H X^T A - H Y||_F^2.
double inner_objective(const Matrix& X, const Matrix& A, const Matrix& Y,
                       const Matrix& mstar, double alpha, double beta,
                       double epsilon);

/// Euclidean projection onto the probability simplex.
Vector project_to_simplex(const Vector& v);

/// Gram matrix of the samples (columns) of X under the chosen kernel.
Matrix compute_kernel(const Matrix& X, KernelKind kind, double gamma);

/// RBF width 1 / (2 median^2) over pairwise distances of a deterministic
/// subsample of at most 1000 columns.
double median_heuristic_gamma(const Matrix& X);

/// Runs the configured variant on raw features; with cfg.kernel != none
/// this forwards to fit_kernel.
FittedModel fit(const Dataset& source, const Dataset& target,
                const SolverConfig& cfg, const FitObserver& observer = {});

/// Kernelized run: replaces raw features by the Gram matrix of the joined
/// sample set and runs the same pipeline on it (the projection becomes
/// n x k).
FittedModel fit_kernel(const Dataset& source, const Dataset& target,
                       const SolverConfig& cfg,
                       const FitObserver& observer = {});

}  // namespace dlcda
