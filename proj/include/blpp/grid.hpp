#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace blpp {

// Row-major so that one level occupies one contiguous row.
using LevelMatrix = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IndexMatrix = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ValueRow = Eigen::ArrayXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Uniform time grid over [t_min, t_max] with spacing delta, one independent
// two-sided Brownian motion per integer level in [level_min, level_max].
// The grid must close exactly and must contain 0 as a node, so that every
// level can be anchored at B(0) = 0.
struct FieldSpec {
  int level_min = 0;
  int level_max = 0;
  double t_min = -1.0;
  double t_max = 1.0;
  double delta = 0.1;
  std::uint64_t seed = 1;

  int levels() const { return level_max - level_min + 1; }

  int nodes() const { return static_cast<int>(std::llround((t_max - t_min) / delta)) + 1; }

  double time_at(int index) const { return t_min + index * delta; }

  // Nearest grid node; callers must range-check when t can fall outside.
  int index_of(double t) const { return static_cast<int>(std::llround((t - t_min) / delta)); }

  int zero_index() const { return index_of(0.0); }

  bool has_level(int level) const { return level >= level_min && level <= level_max; }
  bool has_index(int index) const { return index >= 0 && index < nodes(); }

  void validate() const {
    if (delta <= 0.0) throw std::invalid_argument("FieldSpec: delta must be > 0");
    if (!(t_min < 0.0 && 0.0 < t_max))
      throw std::invalid_argument("FieldSpec: window must satisfy t_min < 0 < t_max");
    if (level_max < level_min)
      throw std::invalid_argument("FieldSpec: level_max < level_min");
    const double span = (t_max - t_min) / delta;
    if (std::abs(span - std::llround(span)) > 1e-9 * std::max(1.0, std::abs(span)))
      throw std::invalid_argument("FieldSpec: (t_max - t_min)/delta is not an integer");
    const double anchor = -t_min / delta;
    if (std::abs(anchor - std::llround(anchor)) > 1e-9 * std::max(1.0, std::abs(anchor)))
      throw std::invalid_argument("FieldSpec: 0 is not a grid node");
  }
};

struct GridPoint {
  int level = 0;
  int index = 0;

  friend bool operator==(const GridPoint& a, const GridPoint& b) {
    return a.level == b.level && a.index == b.index;
  }
  friend bool operator!=(const GridPoint& a, const GridPoint& b) { return !(a == b); }
};

// Nondecreasing jump times s_{m-1} <= s_m <= ... <= s_n stored as node
// indices; jumps[j] is the time the path leaves level start_level + j - 1.
struct UpRightPath {
  int start_level = 0;
  std::vector<int> jumps;
  bool degenerate = false;

  int end_level() const { return start_level + static_cast<int>(jumps.size()) - 2; }

  // Leaves level k at jumps[k - start_level + 1]; enters it one slot earlier.
  int exit_index(int level) const { return jumps[level - start_level + 1]; }
  int entry_index(int level) const { return jumps[level - start_level]; }

  bool nondecreasing() const {
    for (std::size_t j = 1; j < jumps.size(); ++j)
      if (jumps[j] < jumps[j - 1]) return false;
    return true;
  }

  // A path violates the single-vertical-step rule when three consecutive
  // jump times coincide.
  bool has_double_vertical() const {
    for (std::size_t j = 2; j < jumps.size(); ++j)
      if (jumps[j] == jumps[j - 1] && jumps[j - 1] == jumps[j - 2]) return true;
    return false;
  }
};

}  // namespace blpp
