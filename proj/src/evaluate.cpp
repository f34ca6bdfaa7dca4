#include "dlcda/evaluate.hpp"

#include <limits>
#include <string>

namespace dlcda {

std::vector<int> nn_predict(const Matrix& train, const std::vector<int>& labels,
                            const Matrix& queries) {
  if (train.cols() < 1) {
    throw DimensionMismatch("nn_predict: no training samples");
  }
  if (static_cast<Index>(labels.size()) != train.cols()) {
    throw LengthMismatch("nn_predict: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(train.cols()) +
                         " training samples");
  }
  if (queries.rows() != train.rows()) {
    throw DimensionMismatch("nn_predict: query dimension " +
                            std::to_string(queries.rows()) +
                            " != training dimension " +
                            std::to_string(train.rows()));
  }
  std::vector<int> out(static_cast<std::size_t>(queries.cols()));
  for (Index q = 0; q < queries.cols(); ++q) {
    double best = std::numeric_limits<double>::infinity();
    Index at = 0;
    for (Index j = 0; j < train.cols(); ++j) {
      const double d = (train.col(j) - queries.col(q)).squaredNorm();
      if (d < best) {  // strict < keeps the earliest sample on ties
        best = d;
        at = j;
      }
    }
    out[static_cast<std::size_t>(q)] = labels[static_cast<std::size_t>(at)];
  }
  return out;
}

EvalReport score(const std::vector<int>& predicted,
                 const std::vector<int>& truth, int class_count) {
  if (predicted.size() != truth.size()) {
    throw LengthMismatch("score: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(truth.size()) +
                         " truth labels");
  }
  if (truth.empty()) {
    throw LengthMismatch("score: no samples");
  }
  EvalReport report;
  report.sample_count = static_cast<Index>(truth.size());
  report.confusion = Eigen::MatrixXi::Zero(class_count, class_count);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if (t < 1 || t > class_count || p < 1 || p > class_count) {
      throw LabelOutOfRange("score: label outside 1.." +
                            std::to_string(class_count));
    }
    report.confusion(t - 1, p - 1) += 1;
  }
  report.accuracy =
      static_cast<double>(report.confusion.trace()) / report.sample_count;
  for (int c = 0; c < class_count; ++c) {
    const int row_sum = report.confusion.row(c).sum();
    if (row_sum > 0) {
      report.per_class_accuracy[c + 1] =
          static_cast<double>(report.confusion(c, c)) / row_sum;
    }
  }
  return report;
}

}  // namespace dlcda
