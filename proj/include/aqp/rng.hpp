#pragma once

#include <cstdint>
#include <random>

namespace aqp {

/// Seeded generator with platform-independent draws. The standard
/// distributions are implementation-defined, so uniforms are built directly
/// from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  int index(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aqp
