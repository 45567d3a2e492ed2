#pragma once

// Seeded sampling with a fixed mapping from engine output to doubles, so
// that results are reproducible across standard library implementations
// (the std:: distributions are not).

#include <cmath>
#include <cstdint>
#include <random>

#include "cone_gauge/types.hpp"

namespace cone_gauge {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard exponential.
  double exponential() { return -std::log1p(-uniform()); }
  /// Standard normal (Box-Muller, one value per call).
  double normal() {
    const double u = 1.0 - uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * uniform());
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cone_gauge
