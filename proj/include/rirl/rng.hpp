#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace rirl {

/// Splittable counter-style generator (splitmix64 core). Every stochastic
/// routine takes one of these explicitly, so experiments replay bit-for-bit
/// regardless of thread count or platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  /// Independent child stream; advancing the child never perturbs the parent.
  SplitMix64 split() { return SplitMix64(next_u64()); }

  /// Index sampled from a probability vector by CDF walk.
  template <typename Derived>
  int categorical(const Eigen::MatrixBase<Derived>& p) {
    const double u = next_double();
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
      acc += p(i);
      if (u < acc) return i;
    }
    return static_cast<int>(p.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace rirl
