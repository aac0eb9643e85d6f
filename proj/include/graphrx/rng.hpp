// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphrx {

/// Seeded random source with fully specified draw algorithms.
///
/// std::mt19937_64 has a standardized bit stream, but the standard
/// distributions do not; all conversions here are spelled out so that a
/// fixed seed yields identical draws on any platform.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Unbiased integer in [0, n). n must be positive.
  uint64_t below(uint64_t n) {
    // Rejection sampling over the largest multiple of n.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  /// Uniform float in [0, 1).
  float uniform() { return float(engine_() >> 40) * 0x1.0p-24f; }

  /// Uniform double in [0, 1).
  double uniform_double() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform float in [lo, hi).
  float uniform(float lo, float hi) { return lo + (hi - lo) * uniform(); }

  bool coin() { return (engine_() & 1u) != 0; }

  /// Fisher-Yates shuffle with explicit draws.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = size_t(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace graphrx
