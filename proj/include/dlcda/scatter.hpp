#pragma once

#include <string>
#include <vector>

#include "dlcda/numerics.hpp"

namespace dlcda {

/// Renders the first two embedding dimensions as a standalone SVG
/// scatter plot: circles for source samples, squares for target samples,
/// one colour per class, plus a legend. Output is byte-deterministic for
/// identical inputs. Throws DimensionMismatch when the embedding has
/// fewer than two rows, LengthMismatch when labels do not cover the
/// columns, and IoError on write failure.
void emit_scatter(const Matrix& embedded, const std::vector<int>& source_labels,
                  const std::vector<int>& target_labels,
                  const std::string& path);

}  // namespace dlcda
