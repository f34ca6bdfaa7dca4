#include "dlcda/mmd.hpp"

#include <string>

namespace dlcda {

namespace {

std::vector<std::vector<Index>> indices_by_class(const std::vector<int>& labels,
                                                 int class_count, Index base,
                                                 const char* what) {
  std::vector<std::vector<Index>> by_class(
      static_cast<std::size_t>(class_count));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c < 1 || c > class_count) {
      throw LabelOutOfRange(std::string(what) + ": label " + std::to_string(c) +
                            " outside 1.." + std::to_string(class_count));
    }
    by_class[static_cast<std::size_t>(c - 1)].push_back(
        base + static_cast<Index>(i));
  }
  return by_class;
}

// Adds the squared-mean-discrepancy expansion between sample sets P and Q:
// +1/|P|^2 within P, +1/|Q|^2 within Q, -1/(|P||Q|) across. Empty sets
// contribute nothing.
void add_pair_block(Matrix& M, const std::vector<Index>& P,
                    const std::vector<Index>& Q) {
  if (P.empty() || Q.empty()) {
    return;
  }
  const double np = static_cast<double>(P.size());
  const double nq = static_cast<double>(Q.size());
  const double pp = 1.0 / (np * np);
  const double qq = 1.0 / (nq * nq);
  const double pq = -1.0 / (np * nq);
  for (Index i : P) {
    for (Index j : P) {
      M(i, j) += pp;
    }
  }
  for (Index i : Q) {
    for (Index j : Q) {
      M(i, j) += qq;
    }
  }
  for (Index i : P) {
    for (Index j : Q) {
      M(i, j) += pq;
      M(j, i) += pq;
    }
  }
}

}  // namespace

Matrix build_marginal(Index n_s, Index n_t) {
  if (n_s < 1 || n_t < 1) {
    throw DimensionMismatch("build_marginal: both domains need samples");
  }
  const Index n = n_s + n_t;
  Matrix M(n, n);
  const double ss = 1.0 / (static_cast<double>(n_s) * static_cast<double>(n_s));
  const double tt = 1.0 / (static_cast<double>(n_t) * static_cast<double>(n_t));
  const double st =
      -1.0 / (static_cast<double>(n_s) * static_cast<double>(n_t));
  M.topLeftCorner(n_s, n_s).setConstant(ss);
  M.bottomRightCorner(n_t, n_t).setConstant(tt);
  M.topRightCorner(n_s, n_t).setConstant(st);
  M.bottomLeftCorner(n_t, n_s).setConstant(st);
  return M;
}

Matrix build_conditional(const std::vector<int>& labels_s,
                         const std::vector<int>& pseudo_t, int class_count) {
  if (class_count < 1) {
    throw LabelOutOfRange("build_conditional: class_count must be >= 1");
  }
  const Index n_s = static_cast<Index>(labels_s.size());
  const Index n_t = static_cast<Index>(pseudo_t.size());
  const auto src = indices_by_class(labels_s, class_count, 0,
                                    "build_conditional: source");
  const auto tgt = indices_by_class(pseudo_t, class_count, n_s,
                                    "build_conditional: target");
  Matrix M = Matrix::Zero(n_s + n_t, n_s + n_t);
  for (int c = 0; c < class_count; ++c) {
    add_pair_block(M, src[static_cast<std::size_t>(c)],
                   tgt[static_cast<std::size_t>(c)]);
  }
  return M;
}

Matrix build_repulsive(const std::vector<int>& labels_s,
                       const std::vector<int>& pseudo_t, int class_count) {
  if (class_count < 1) {
    throw LabelOutOfRange("build_repulsive: class_count must be >= 1");
  }
  const Index n_s = static_cast<Index>(labels_s.size());
  const Index n_t = static_cast<Index>(pseudo_t.size());
  const auto src = indices_by_class(labels_s, class_count, 0,
                                    "build_repulsive: source");
  const auto tgt = indices_by_class(pseudo_t, class_count, n_s,
                                    "build_repulsive: target");
  Matrix M = Matrix::Zero(n_s + n_t, n_s + n_t);
  for (int c = 0; c < class_count; ++c) {
    for (int r = 0; r < class_count; ++r) {
      if (r == c) {
        continue;
      }
      const auto& sc = src[static_cast<std::size_t>(c)];
      const auto& tc = tgt[static_cast<std::size_t>(c)];
      const auto& sr = src[static_cast<std::size_t>(r)];
      const auto& tr = tgt[static_cast<std::size_t>(r)];
      add_pair_block(M, sc, sr);  // source c vs source r
      add_pair_block(M, sc, tr);  // source c vs target r
      add_pair_block(M, tc, sr);  // target c vs source r
    }
  }
  return M;
}

MmdWeights assemble_mstar(const Matrix& m0, const Matrix& mc_sum,
                          const Matrix& m_rep) {
  if (m0.rows() != m0.cols() || mc_sum.rows() != m0.rows() ||
      mc_sum.cols() != m0.cols() || m_rep.rows() != m0.rows() ||
      m_rep.cols() != m0.cols()) {
    throw DimensionMismatch("assemble_mstar: weight matrices must be square "
                            "and equally sized");
  }
  MmdWeights w;
  w.m0 = m0;
  w.mc_sum = mc_sum;
  w.m_rep = m_rep;
  w.mstar = m0 + mc_sum - m_rep;
  return w;
}

double mmd_value(const Matrix& X, const Matrix& A, const Matrix& M) {
  if (M.rows() != M.cols() || M.rows() != X.cols()) {
    throw DimensionMismatch("mmd_value: M must be square with side " +
                            std::to_string(X.cols()));
  }
  if (A.rows() != X.rows()) {
    throw DimensionMismatch("mmd_value: A has " + std::to_string(A.rows()) +
                            " rows but X has " + std::to_string(X.rows()));
  }
  const Matrix P = X.transpose() * A;  // n x k
  return (M * P).cwiseProduct(P).sum();
}

}  // namespace dlcda
