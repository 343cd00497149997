#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gg {

// All randomness in the pipeline flows through one of these helpers on a
// caller-supplied mt19937_64, so a fixed seed reproduces a run byte for byte.
// The transforms are spelled out here instead of using std::*_distribution,
// whose output is implementation-defined.
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
  return lo + (hi - lo) * u;
}

inline int uniform_int(Rng& rng, int lo, int hi) {  // inclusive range
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

// Box-Muller; draws two uniforms per call.
inline double normal(Rng& rng) {
  double u1 = uniform(rng);
  double u2 = uniform(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace gg
