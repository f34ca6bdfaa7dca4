#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "dlcda/data.hpp"

namespace dlcda {

/// Deterministic, platform-independent random source: a std::mt19937_64
/// stream (algorithm pinned by the standard) turned into uniforms and
/// Box-Muller Gaussian pairs, avoiding distribution classes whose output
/// is implementation-defined.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// One Box-Muller pair of independent standard normals.
  std::array<double, 2> gaussian_pair();

 private:
  std::mt19937_64 engine_;
};

/// Parameters of the built-in two-domain benchmark: four classes in the
/// plane (three Gaussian blobs and one half-moon), where the target
/// domain shifts classes 1-2 slightly and class 3 strongly, and both
/// shifts and rotates the moon.
struct SyntheticConfig {
  std::uint64_t seed = 0;
  int samples_per_class = 100;
  double shift_small = 0.8;
  double shift_large = 2.0;
  double moon_radius = 1.0;
  double moon_noise = 0.1;
};

struct DomainPair {
  Dataset source;
  Dataset target;
};

/// Generates the benchmark pair. Draw order (and therefore the exact
/// output for a given seed) is fixed: source then target, classes in
/// order, one point at a time.
DomainPair make_synthetic(const SyntheticConfig& config);

}  // namespace dlcda
