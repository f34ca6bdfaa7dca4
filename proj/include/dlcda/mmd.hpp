#pragma once

#include <vector>

#include "dlcda/numerics.hpp"

namespace dlcda {

/// The distribution-alignment weight matrices over the joined sample set
/// (source samples first, then target), plus their combination
/// mstar = m0 + mc_sum - m_rep.
struct MmdWeights {
  Matrix m0;      // marginal weights
  Matrix mc_sum;  // summed per-class conditional weights
  Matrix m_rep;   // summed between-class repulsive weights
  Matrix mstar;
};

/// Marginal weight matrix M0 of size (n_s + n_t)^2:
/// 1/n_s^2 on source-source, 1/n_t^2 on target-target and
/// -1/(n_s n_t) on the cross blocks.
Matrix build_marginal(Index n_s, Index n_t);

/// Sum over classes of per-class marginal-style blocks, where the
/// source side uses true labels and the target side pseudo-labels
/// (both in 1..class_count). Classes empty on either side contribute
/// nothing.
Matrix build_conditional(const std::vector<int>& labels_s,
                         const std::vector<int>& pseudo_t, int class_count);

/// Repulsive weights: for every ordered pair of distinct classes (c, r),
/// accumulates the blocks that measure the distance between source
/// class c and source class r, source class c and target class r, and
/// target class c and source class r.
Matrix build_repulsive(const std::vector<int>& labels_s,
                       const std::vector<int>& pseudo_t, int class_count);

/// Combines the three matrices into mstar = m0 + mc_sum - m_rep and
/// returns all four.
MmdWeights assemble_mstar(const Matrix& m0, const Matrix& mc_sum,
                          const Matrix& m_rep);

/// Evaluates tr(A^T X M X^T A), the alignment value of embedding A^T X
/// under weight matrix M.
double mmd_value(const Matrix& X, const Matrix& A, const Matrix& M);

}  // namespace dlcda
