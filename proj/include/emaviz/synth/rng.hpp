#pragma once

#include <cstdint>

namespace emaviz::synth {

/// SplitMix64 (Steele, Lea and Flood 2014): state += 0x9E3779B97F4A7C15, then the
/// 30/27/31 xor-shift-multiply finaliser. The derived draws below are written out
/// in full so that another implementation can regenerate the same fixtures.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// An independent stream seeded by the next output.
  SplitMix64 split() { return SplitMix64(next()); }

  /// Top 53 bits as a double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Integer in [lo, hi], by floor(uniform() * span).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal approximated by the sum of twelve uniforms minus six.
  double normal() {
    double s = 0;
    for (int i = 0; i < 12; ++i) s += uniform();
    return s - 6;
  }

 private:
  std::uint64_t state_;
};

}  // namespace emaviz::synth
