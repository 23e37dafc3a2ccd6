#pragma once

#include <string>

#include "blpp/grid.hpp"

namespace blpp {

// The random environment: one piecewise-linear two-sided Brownian motion per
// level, sampled on the grid nodes and anchored so B_k(0) = 0 exactly.
// With piecewise-linear interpolation every passage-time supremum over
// continuum jump times is attained at grid nodes, so grid-restricted dynamic
// programming is exact for the interpolated field.
struct BrownianField {
  FieldSpec spec;
  LevelMatrix values;  // (levels x nodes), row k - level_min

  double at(int level, int index) const { return values(level - spec.level_min, index); }

  auto row(int level) const { return values.row(level - spec.level_min); }
};

BrownianField generate_field(const FieldSpec& spec);

// Wraps caller-provided node arrays verbatim (analytic test fixtures).
BrownianField inject_field(const FieldSpec& spec, const LevelMatrix& arrays);

// Binary format: magic "BLPP1", little-endian header
// (level_min, level_max : i32; t_min, t_max, delta : f64; seed : u64),
// per-level f64 node arrays, trailing CRC32 over everything before it.
void save_field(const BrownianField& field, const std::string& path);
BrownianField load_field(const std::string& path);

std::uint32_t crc32(const unsigned char* data, std::size_t n, std::uint32_t crc = 0);

}  // namespace blpp
