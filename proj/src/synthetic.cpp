#include "dlcda/synthetic.hpp"

#include <cmath>

namespace dlcda {

std::array<double, 2> PortableRng::gaussian_pair() {
  // Box-Muller on (0,1] x [0,1) keeps log() away from zero.
  const double u = 1.0 - uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double t = 2.0 * M_PI * v;
  return {r * std::cos(t), r * std::sin(t)};
}

namespace {

constexpr int kClassCount = 4;
constexpr double kBlobSigma = 0.35;

using Eigen::Vector2d;

// Class layout of the source domain: three blobs and one half-moon.
const Vector2d kBlobCenter[3] = {Vector2d(0.0, 0.0), Vector2d(2.4, 0.0),
                                 Vector2d(0.0, 3.0)};
const Vector2d kMoonCenter(4.3, 3.4);

// Per-class target shifts. Classes 1-2 move by shift_small, class 3 and
// the moon by shift_large; the moon additionally rotates about its center
// proportionally to shift_large.
const Vector2d kSmallShiftDir[2] = {Vector2d(1.0, 0.0), Vector2d(0.0, 1.0)};
const Vector2d kBlob3ShiftDir(1.0, 0.0);
const Vector2d kMoonShiftDir(0.3, -0.2);
constexpr double kMoonRotationPerUnitShift = 0.4;

struct DomainShift {
  Vector2d blob[3];
  Vector2d moon;
  double rotation = 0.0;
};

void fill_domain(Matrix& X, std::vector<int>& labels, PortableRng& rng,
                 const SyntheticConfig& cfg, const DomainShift& shift) {
  const int spc = cfg.samples_per_class;
  Index col = 0;
  for (int c = 0; c < 3; ++c) {
    const Vector2d center = kBlobCenter[c] + shift.blob[c];
    for (int i = 0; i < spc; ++i, ++col) {
      const auto g = rng.gaussian_pair();
      X.col(col) = center + kBlobSigma * Vector2d(g[0], g[1]);
      labels.push_back(c + 1);
    }
  }
  const double cr = std::cos(shift.rotation);
  const double sr = std::sin(shift.rotation);
  const Vector2d center = kMoonCenter + shift.moon;
  for (int i = 0; i < spc; ++i, ++col) {
    // Upper half-moon: angle uniform in [0, pi], isotropic jitter on top.
    const double theta = M_PI * rng.uniform();
    const Vector2d arc(cfg.moon_radius * std::cos(theta),
                       cfg.moon_radius * std::sin(theta));
    const Vector2d rotated(cr * arc.x() - sr * arc.y(),
                           sr * arc.x() + cr * arc.y());
    const auto g = rng.gaussian_pair();
    X.col(col) = center + rotated + cfg.moon_noise * Vector2d(g[0], g[1]);
    labels.push_back(kClassCount);
  }
}

Dataset make_domain(PortableRng& rng, const SyntheticConfig& cfg,
                    const DomainShift& shift, DomainTag tag,
                    const std::string& name) {
  Dataset d;
  d.features.resize(2, static_cast<Index>(kClassCount) * cfg.samples_per_class);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(d.features.cols()));
  fill_domain(d.features, labels, rng, cfg, shift);
  d.labels = std::move(labels);
  d.domain_tag = tag;
  d.name = name;
  return d;
}

}  // namespace

DomainPair make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.samples_per_class < 4) {
    throw ConfigError("make_synthetic: samples_per_class must be >= 4");
  }
  if (!(cfg.moon_radius > 0.0) || !(cfg.moon_noise > 0.0)) {
    throw ConfigError("make_synthetic: moon_radius and moon_noise must be > 0");
  }

  PortableRng rng(cfg.seed);

  DomainShift none;
  none.blob[0] = none.blob[1] = none.blob[2] = Vector2d::Zero();
  none.moon = Vector2d::Zero();

  DomainShift moved;
  moved.blob[0] = cfg.shift_small * kSmallShiftDir[0];
  moved.blob[1] = cfg.shift_small * kSmallShiftDir[1];
  moved.blob[2] = cfg.shift_large * kBlob3ShiftDir;
  moved.moon = cfg.shift_large * kMoonShiftDir;
  moved.rotation = kMoonRotationPerUnitShift * cfg.shift_large;

  DomainPair pair;
  pair.source = make_domain(rng, cfg, none, DomainTag::source,
                            "synthetic-source");
  pair.target = make_domain(rng, cfg, moved, DomainTag::target,
                            "synthetic-target");
  return pair;
}

}  // namespace dlcda
