#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlcda/numerics.hpp"

namespace dlcda {

enum class DomainTag { source, target };

/// A set of samples stored one per column (features is m x n), with
/// optional integer labels in 1..C.
struct Dataset {
  Matrix features;
  std::optional<std::vector<int>> labels;
  DomainTag domain_tag = DomainTag::source;
  std::string name;

  Index feature_dim() const { return features.rows(); }
  Index sample_count() const { return features.cols(); }
};

enum class FeatureFormat { csv, binary };

/// One-hot style label block: n x width, every row on the probability
/// simplex. Columns beyond class_count are padding.
struct LabelMatrix {
  Matrix values;
  int class_count = 0;
  int width = 0;
};

/// Reads labels (one integer per line, values >= 1). Throws ParseError
/// on malformed lines and LabelOutOfRange on values < 1.
std::vector<int> load_labels(const std::string& path);

/// Loads a feature file (CSV: one sample per line, comma-separated
/// floats; binary: "DLCF" header, see save_features_binary) plus an
/// optional label file. Throws ParseError / LabelCountMismatch /
/// NonFiniteValue / IoError.
Dataset load_features(const std::string& feature_path,
                      const std::optional<std::string>& label_path,
                      FeatureFormat format,
                      DomainTag tag = DomainTag::source,
                      const std::string& name = "");

/// Writes the binary feature format: magic "DLCF", uint32 feature dim,
/// uint32 sample count (both little-endian), then column-major float64
/// payload. Round-trips bit-exactly with load_features.
void save_features_binary(const Matrix& features, const std::string& path);

void save_features_csv(const Matrix& features, const std::string& path);
void save_labels(const std::vector<int>& labels, const std::string& path);

/// Returns a copy with every feature row z-scored using the population
/// standard deviation; rows with zero variance become all zeros.
/// Requires at least two samples.
Dataset standardize(const Dataset& input);

/// Builds the n x width one-hot matrix for labels in 1..class_count,
/// width >= class_count (extra columns stay zero). Throws WidthTooSmall
/// and LabelOutOfRange.
LabelMatrix encode_labels(const std::vector<int>& labels, int class_count,
                          int width);

/// Recovers hard labels from a label matrix: per-row argmax over the
/// first class_count columns, ties resolved toward the smaller class.
std::vector<int> decode_labels(const Matrix& values, int class_count);

/// Largest label value; throws LengthMismatch on an empty vector and
/// LabelOutOfRange on values < 1.
int max_label(const std::vector<int>& labels);

}  // namespace dlcda
