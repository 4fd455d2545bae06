#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "affhj/defaults.hpp"

namespace affhj {

/// splitmix64; deterministic across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

using Interval = std::pair<double, double>;

/// Axis-aligned box per variable, a point count and an RNG seed.
struct SamplePlan {
  std::vector<Interval> box;
  std::size_t count = defaults::sample_count;
  std::uint64_t seed = defaults::seed;

  /// Default box [-1, 1]^dim.
  static SamplePlan unit(std::size_t dim);
  /// Copy with the box resized to `dim` (extra axes get the default box).
  SamplePlan resized(std::size_t dim) const;
};

std::vector<std::vector<double>> sample_points(const SamplePlan& plan);

}  // namespace affhj
