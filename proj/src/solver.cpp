#include "dlcda/solver.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dlcda/evaluate.hpp"

namespace dlcda {

namespace {

// X * H with H = I - (1/n) 1 1^T: subtract the mean sample from each column.
Matrix center_columns(const Matrix& X) {
  return X.colwise() - X.rowwise().mean().eval();
}

// H * Y: subtract the column means.
Matrix center_rows(const Matrix& Y) {
  return Y.rowwise() - Y.colwise().mean().eval();
}

// Smoothed row norms phi_j = sqrt(||a^j||^2 + eps).
Vector row_norms_smoothed(const Matrix& A, double eps) {
  Vector phi(A.rows());
  for (Index i = 0; i < A.rows(); ++i) {
    phi(i) = std::sqrt(A.row(i).squaredNorm() + eps);
  }
  return phi;
}

void check_solver_config(const SolverConfig& cfg) {
  if (cfg.k < 1) {
    throw ConfigError("solver: k must be >= 1");
  }
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) {
    throw ConfigError("solver: alpha and beta must be >= 0");
  }
  if (cfg.outer_iters < 1 || cfg.inner_iters < 1) {
    throw ConfigError("solver: iteration counts must be >= 1");
  }
  if (!(cfg.epsilon > 0.0)) {
    throw ConfigError("solver: epsilon must be > 0");
  }
  if (cfg.tol < 0.0 || cfg.ridge < 0.0) {
    throw ConfigError("solver: tol and ridge must be >= 0");
  }
}

}  // namespace

Matrix init_projection(const Matrix& X, const Matrix& m0, double alpha, int k,
                       double ridge) {
  const Index d = X.rows();
  const Index n = X.cols();
  if (m0.rows() != n || m0.cols() != n) {
    throw DimensionMismatch("init_projection: weight matrix must be " +
                            std::to_string(n) + "x" + std::to_string(n));
  }
  if (k < 1 || k > std::min(d, n)) {
    throw DimensionMismatch("init_projection: k = " + std::to_string(k) +
                            " outside [1, min(" + std::to_string(d) + ", " +
                            std::to_string(n) + ")]");
  }
  Matrix S = X * (m0 * X.transpose());
  S = 0.5 * (S + S.transpose()).eval();
  S.diagonal().array() += alpha;
  const Matrix Xc = center_columns(X);
  Matrix B = Xc * Xc.transpose();
  B = 0.5 * (B + B.transpose()).eval();
  const double ridge_abs = ridge * B.trace() / static_cast<double>(d);
  return sym_geig_smallest(S, B, k, ridge_abs).vectors;
}

Vector update_offset(const Matrix& X, const Matrix& A, const Matrix& Y) {
  const Index n = X.cols();
  if (A.rows() != X.rows()) {
    throw DimensionMismatch("update_offset: A has " + std::to_string(A.rows()) +
                            " rows but X has " + std::to_string(X.rows()));
  }
  if (Y.rows() != n || Y.cols() != A.cols()) {
    throw DimensionMismatch("update_offset: Y must be " + std::to_string(n) +
                            "x" + std::to_string(A.cols()));
  }
  return (Y.colwise().sum().transpose() - A.transpose() * X.rowwise().sum()) /
         static_cast<double>(n);
}

double inner_objective(const Matrix& X, const Matrix& A, const Matrix& Y,
                       const Matrix& mstar, double alpha, double beta,
                       double epsilon) {
  const Matrix P = X.transpose() * A;
  const double align = (mstar * P).cwiseProduct(P).sum();
  const double reg = (center_rows(P) - center_rows(Y)).squaredNorm();
  const double s = row_norms_smoothed(A, epsilon).sum();
  return align + alpha * A.squaredNorm() + beta * s * s + reg;
}

Matrix update_projection(const Matrix& X, const Matrix& Y, const Vector& e,
                         const Matrix& mstar, const SolverConfig& cfg,
                         std::vector<double>* inner_objectives) {
  check_solver_config(cfg);
  const Index d = X.rows();
  const Index n = X.cols();
  if (Y.rows() != n) {
    throw DimensionMismatch("update_projection: Y has " +
                            std::to_string(Y.rows()) + " rows but X has " +
                            std::to_string(n) + " columns");
  }
  if (e.size() != Y.cols()) {
    throw DimensionMismatch("update_projection: offset length " +
                            std::to_string(e.size()) + " != label width " +
                            std::to_string(Y.cols()));
  }
  if (mstar.rows() != n || mstar.cols() != n) {
    throw DimensionMismatch("update_projection: mstar must be " +
                            std::to_string(n) + "x" + std::to_string(n));
  }

  const Matrix Xc = center_columns(X);
  Matrix quad = X * (mstar * X.transpose());
  quad += Xc * Xc.transpose();
  quad = 0.5 * (quad + quad.transpose()).eval();
  const Matrix rhs = Xc * center_rows(Y);

  Vector g = Vector::Ones(d);  // diagonal of G, reset to identity per call
  Matrix A;
  double prev = 0.0;
  for (int it = 0; it < cfg.inner_iters; ++it) {
    Matrix sys = quad;
    sys.diagonal().array() += cfg.alpha;
    sys.diagonal() += cfg.beta * g;
    Eigen::LLT<Matrix> llt(sys);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite(
          "update_projection: system matrix is not positive-definite; "
          "increase alpha");
    }
    A = llt.solve(rhs);
    A += llt.solve(rhs - sys * A);  // one refinement step

    const Vector phi = row_norms_smoothed(A, cfg.epsilon);
    g = (phi.sum() / phi.array()).matrix();

    const double obj =
        inner_objective(X, A, Y, mstar, cfg.alpha, cfg.beta, cfg.epsilon);
    if (inner_objectives) {
      inner_objectives->push_back(obj);
    }
    if (it > 0 &&
        std::abs(obj - prev) <= cfg.tol * std::max(1.0, std::abs(prev))) {
      break;
    }
    prev = obj;
  }
  return A;
}

Vector project_to_simplex(const Vector& v) {
  const Index k = v.size();
  if (k < 1) {
    throw DimensionMismatch("project_to_simplex: empty vector");
  }
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < k; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) {
      theta = t;
    }
  }
  return (v.array() - theta).max(0.0).matrix();
}

LabelMatrix update_labels(const Matrix& X, const Matrix& A, const Vector& e,
                          const LabelMatrix& y_source, int width) {
  const Index n = X.cols();
  const Index n_s = y_source.values.rows();
  if (n_s > n) {
    throw DimensionMismatch("update_labels: more source rows than samples");
  }
  if (A.rows() != X.rows()) {
    throw DimensionMismatch("update_labels: A has " + std::to_string(A.rows()) +
                            " rows but X has " + std::to_string(X.rows()));
  }
  if (A.cols() != width || e.size() != width ||
      y_source.values.cols() != width || y_source.width != width) {
    throw DimensionMismatch("update_labels: width mismatch");
  }
  LabelMatrix out;
  out.class_count = y_source.class_count;
  out.width = width;
  out.values.resize(n, width);
  out.values.topRows(n_s) = y_source.values;  // labeled rows pass through
  for (Index i = n_s; i < n; ++i) {
    Vector v = A.transpose() * X.col(i) + e;
    const double delta = (1.0 - v.sum()) / static_cast<double>(width);
    v.array() += delta;
    if (v.minCoeff() >= 0.0) {
      out.values.row(i) = v.transpose();
    } else {
      out.values.row(i) = project_to_simplex(v).transpose();
    }
  }
  return out;
}

double objective(const Matrix& X, const Matrix& A, const Vector& e,
                 const Matrix& Y, const Matrix& mstar, double alpha,
                 double beta, double epsilon) {
  const Matrix P = X.transpose() * A;
  const double align = (mstar * P).cwiseProduct(P).sum();
  Matrix R = P - Y;
  R.rowwise() -= e.transpose();
  const double s = row_norms_smoothed(A, epsilon).sum();
  return align + alpha * A.squaredNorm() + beta * s * s + R.squaredNorm();
}

Matrix compute_kernel(const Matrix& X, KernelKind kind, double gamma) {
  if (kind == KernelKind::none) {
    throw ConfigError("compute_kernel: no kernel selected");
  }
  Matrix K = X.transpose() * X;
  if (kind == KernelKind::linear) {
    K = 0.5 * (K + K.transpose()).eval();
    return K;
  }
  if (!(gamma > 0.0)) {
    throw ConfigError("compute_kernel: rbf kernel needs gamma > 0");
  }
  const Vector sq = X.colwise().squaredNorm().transpose();
  Matrix D = -2.0 * K;
  D.colwise() += sq;
  D.rowwise() += sq.transpose();
  K = (-gamma * D.cwiseMax(0.0).array()).exp().matrix();
  K = 0.5 * (K + K.transpose()).eval();
  K.diagonal().setOnes();
  return K;
}

double median_heuristic_gamma(const Matrix& X) {
  const Index n = X.cols();
  if (n < 2) {
    throw DimensionMismatch("median_heuristic_gamma: needs >= 2 samples");
  }
  // Deterministic subsample: at most 1000 evenly spaced columns.
  std::vector<Index> idx;
  if (n <= 1000) {
    idx.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      idx[static_cast<std::size_t>(i)] = i;
    }
  } else {
    idx.resize(1000);
    for (Index i = 0; i < 1000; ++i) {
      idx[static_cast<std::size_t>(i)] = (i * n) / 1000;
    }
  }
  std::vector<double> dist;
  dist.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      dist.push_back((X.col(idx[a]) - X.col(idx[b])).norm());
    }
  }
  // Lower median keeps the choice deterministic for even counts.
  const std::size_t mid = (dist.size() - 1) / 2;
  std::nth_element(dist.begin(),
                   dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  const double median = dist[mid];
  if (!(median > 0.0)) {
    return 1.0;  // all subsampled points coincide
  }
  return 1.0 / (2.0 * median * median);
}

namespace {

struct PipelineInput {
  const Matrix& F;  // d x n working representation (features or Gram matrix)
  const std::vector<int>& labels_s;
  const std::vector<int>* target_truth;
  Index n_s = 0;
  Index n_t = 0;
  int class_count = 0;
};

std::vector<int> concat_labels(const std::vector<int>& a,
                               const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

FittedModel run_pipeline(const PipelineInput& in, const SolverConfig& cfg,
                         const FitObserver& observer,
                         std::vector<std::string> warnings,
                         double kernel_gamma) {
  const Matrix& F = in.F;
  const Index n = in.n_s + in.n_t;
  const int C = in.class_count;
  const int k = cfg.k;

  const LabelMatrix y_source = encode_labels(in.labels_s, C, k);
  const Matrix m0 = build_marginal(in.n_s, in.n_t);

  // Bootstrap: eigen-init against the marginal weights, then 1-NN
  // pseudo-labels in the embedded space.
  Matrix A = init_projection(F, m0, cfg.alpha, k, cfg.ridge);
  Matrix Z = A.transpose() * F;
  std::vector<int> pseudo =
      nn_predict(Z.leftCols(in.n_s), in.labels_s, Z.rightCols(in.n_t));
  LabelMatrix Y = encode_labels(concat_labels(in.labels_s, pseudo), C, k);
  Vector e = Vector::Zero(k);

  const Matrix zero = Matrix::Zero(n, n);
  Matrix mstar = m0;

  FittedModel model;
  model.warnings = std::move(warnings);
  model.class_count = C;
  model.kernel_gamma = kernel_gamma;
  model.history.reserve(static_cast<std::size_t>(cfg.outer_iters));

  for (int t = 1; t <= cfg.outer_iters; ++t) {
    IterationRecord rec;
    const Matrix* used = &mstar;
    if (cfg.variant == Variant::dda) {
      // Alignment-only ablation: one eigenproblem per round, labels from
      // nearest neighbours, no regression or offset.
      A = init_projection(F, mstar, cfg.alpha, k, cfg.ridge);
      Z = A.transpose() * F;
      pseudo = nn_predict(Z.leftCols(in.n_s), in.labels_s,
                          Z.rightCols(in.n_t));
      Y = encode_labels(concat_labels(in.labels_s, pseudo), C, k);
      rec.objective = mmd_value(F, A, mstar) + cfg.alpha * A.squaredNorm();
    } else {
      if (cfg.variant == Variant::full) {
        mstar =
            assemble_mstar(m0, build_conditional(in.labels_s, pseudo, C),
                           build_repulsive(in.labels_s, pseudo, C))
                .mstar;
      } else {
        used = &zero;  // label-consistency ablation drops the alignment term
      }
      // The offset is refreshed after the projection so the label update
      // sees a coordinate-consistent (A, e) pair; a stale offset injects the
      // between-iteration drift of the embedding mean into every label row
      // and destabilizes the pseudo-labels.
      A = update_projection(F, Y.values, e, *used, cfg, &rec.inner_objectives);
      e = update_offset(F, A, Y.values);
      Y = update_labels(F, A, e, y_source, k);
      pseudo = decode_labels(Y.values.bottomRows(in.n_t), C);
      rec.objective =
          objective(F, A, e, Y.values, *used, cfg.alpha, cfg.beta, cfg.epsilon);
    }
    if (in.target_truth) {
      rec.target_accuracy = score(pseudo, *in.target_truth, C).accuracy;
    }
    if (observer) {
      observer(
          FitEvent{t, A, e, Y, *used, rec.inner_objectives, rec.objective});
    }
    model.history.push_back(std::move(rec));
    if (cfg.variant == Variant::dda) {
      mstar = assemble_mstar(m0, build_conditional(in.labels_s, pseudo, C),
                             build_repulsive(in.labels_s, pseudo, C))
                  .mstar;
    }
  }

  model.projection.basis = A;
  model.projection.offset = e;
  model.projection.k = k;
  model.label_matrix = std::move(Y);
  model.target_predictions = std::move(pseudo);
  model.embedded = A.transpose() * F;
  return model;
}

// Shared validation; returns the class count.
int validate_pair(const Dataset& source, const Dataset& target) {
  if (!source.labels) {
    throw Error("fit: source dataset has no labels");
  }
  if (source.sample_count() < 1 || target.sample_count() < 1) {
    throw DimensionMismatch("fit: both domains need at least one sample");
  }
  if (source.feature_dim() != target.feature_dim()) {
    throw DimensionMismatch("fit: feature dimensions differ (" +
                            std::to_string(source.feature_dim()) + " vs " +
                            std::to_string(target.feature_dim()) + ")");
  }
  const int C = max_label(*source.labels);
  std::vector<bool> seen(static_cast<std::size_t>(C), false);
  for (int v : *source.labels) {
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
  for (int c = 0; c < C; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw ClassMissingInSource("fit: class " + std::to_string(c + 1) +
                                 " has no source samples");
    }
  }
  if (target.labels &&
      static_cast<Index>(target.labels->size()) != target.sample_count()) {
    throw LabelCountMismatch("fit: target label count mismatch");
  }
  return C;
}

// Clamps k to the usable limit, recording a warning.
int effective_width(int k, Index limit, int class_count,
                    std::vector<std::string>& warnings) {
  int eff = k;
  if (static_cast<Index>(eff) > limit) {
    eff = static_cast<int>(limit);
    warnings.push_back("k reduced from " + std::to_string(k) + " to " +
                       std::to_string(eff) + " (limited by the data)");
  }
  if (eff < class_count) {
    throw WidthTooSmall("fit: k = " + std::to_string(eff) +
                        " is below the class count " +
                        std::to_string(class_count));
  }
  return eff;
}

}  // namespace

FittedModel fit(const Dataset& source, const Dataset& target,
                const SolverConfig& cfg, const FitObserver& observer) {
  if (cfg.kernel != KernelKind::none) {
    return fit_kernel(source, target, cfg, observer);
  }
  check_solver_config(cfg);
  const int C = validate_pair(source, target);
  const Index n = source.sample_count() + target.sample_count();
  std::vector<std::string> warnings;
  SolverConfig eff = cfg;
  eff.k =
      effective_width(cfg.k, std::min(source.feature_dim(), n), C, warnings);

  Matrix F(source.feature_dim(), n);
  F.leftCols(source.sample_count()) = source.features;
  F.rightCols(target.sample_count()) = target.features;

  PipelineInput in{F,
                   *source.labels,
                   target.labels ? &*target.labels : nullptr,
                   source.sample_count(),
                   target.sample_count(),
                   C};
  return run_pipeline(in, eff, observer, std::move(warnings), 0.0);
}

FittedModel fit_kernel(const Dataset& source, const Dataset& target,
                       const SolverConfig& cfg, const FitObserver& observer) {
  if (cfg.kernel == KernelKind::none) {
    throw ConfigError("fit_kernel: no kernel selected");
  }
  check_solver_config(cfg);
  const int C = validate_pair(source, target);
  const Index n = source.sample_count() + target.sample_count();
  std::vector<std::string> warnings;
  SolverConfig eff = cfg;
  eff.k = effective_width(cfg.k, n, C, warnings);

  Matrix X(source.feature_dim(), n);
  X.leftCols(source.sample_count()) = source.features;
  X.rightCols(target.sample_count()) = target.features;

  double gamma = 0.0;
  if (cfg.kernel == KernelKind::rbf) {
    gamma = cfg.gamma > 0.0 ? cfg.gamma : median_heuristic_gamma(X);
  }
  const Matrix K = compute_kernel(X, cfg.kernel, gamma);

  // Diagnostic only: warn when the Gram matrix is indefinite beyond
  // round-off, which makes the alignment terms unreliable.
  {
    Matrix shifted = K;
    shifted.diagonal().array() += 1e-8 * K.norm();
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
      warnings.push_back("kernel matrix has significantly negative "
                         "eigenvalues; results may be unreliable");
    }
  }

  PipelineInput in{K,
                   *source.labels,
                   target.labels ? &*target.labels : nullptr,
                   source.sample_count(),
                   target.sample_count(),
                   C};
  return run_pipeline(in, eff, observer, std::move(warnings), gamma);
}

}  // namespace dlcda
