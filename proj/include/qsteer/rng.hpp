#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qsteer {

// Deterministic scalar deviates built directly on std::mt19937_64. The engine
// is fully specified by the standard, but the <random> distributions are
// implementation-defined, which would break the byte-identical-output
// contract across standard libraries; these helpers pin the exact arithmetic.

// Uniform on [0, 1): the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller (one deviate per call keeps call sites
// stateless; the discarded half costs nothing at the scales used here).
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 == 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qsteer
