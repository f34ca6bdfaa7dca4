#pragma once

#include <map>
#include <vector>

#include "dlcda/numerics.hpp"

namespace dlcda {

struct EvalReport {
  double accuracy = 0.0;
  std::map<int, double> per_class_accuracy;  // classes present in truth
  Eigen::MatrixXi confusion;                 // rows = truth, cols = predicted
  Index sample_count = 0;
};

/// 1-nearest-neighbour prediction under squared Euclidean distance;
/// distance ties keep the earliest training sample. Columns are samples.
std::vector<int> nn_predict(const Matrix& train, const std::vector<int>& labels,
                            const Matrix& queries);

/// Accuracy, per-class accuracy and the confusion matrix of predictions
/// against ground truth (labels in 1..class_count).
EvalReport score(const std::vector<int>& predicted,
                 const std::vector<int>& truth, int class_count);

}  // namespace dlcda
