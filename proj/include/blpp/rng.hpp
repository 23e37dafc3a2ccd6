#pragma once

#include <cmath>
#include <cstdint>

namespace blpp {

// Counter-based generator: every Gaussian increment is a pure function of
// (seed, level, node, salt), so fields are reproducible regardless of the
// order levels or nodes are filled in.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::int64_t level, std::int64_t node,
                                  std::uint64_t salt) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(level));
  h = mix64(h ^ static_cast<std::uint64_t>(node));
  h = mix64(h ^ salt);
  return h;
}

// Uniform in the open interval (0, 1).
inline double uniform01(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two independent counter streams.
inline double gaussian(std::uint64_t seed, std::int64_t level, std::int64_t node) {
  const double u1 = uniform01(counter_hash(seed, level, node, 0x9f4a7c15u));
  const double u2 = uniform01(counter_hash(seed, level, node, 0x3bcc908bu));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace blpp
