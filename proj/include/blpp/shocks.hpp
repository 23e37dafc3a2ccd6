#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blpp/geodesics.hpp"

namespace blpp {

// A discontinuity of the leftmost argmax map: the ascent at s* stays optimal
// while the maximizer seen from the next node relocates strictly rightward.
// gap measures how far the configuration is from an exact up/right tie; true
// branch points of the geodesic tree have gaps that vanish under grid
// refinement, spurious relocations keep order-one gaps.
struct BranchPoint {
  int level = 0;
  int index = 0;      // s*, the up-arm foot
  int arm_index = 0;  // tauL(level, index + 1), the right-arm landing node
  double gap = 0.0;
};

std::vector<BranchPoint> detect_branches(const ArgmaxMaps& maps, int level_lo, int level_hi,
                                         int col_lo = 0, int col_hi = -1);

struct ShockSet {
  Target target;
  int eta_sign = 0;
  double eps = 0.0;
  std::vector<BranchPoint> shocks;  // sorted by (level, index), gap <= eps
};

ShockSet shock_set(const std::vector<BranchPoint>& branches, const ArgmaxMaps& maps, double eps);

double default_shock_eps(const FieldSpec& spec, double eps_factor = 3.0);

// True iff y lies weakly between the up-arm and the right-arm traced from x,
// i.e. y is an ancestor of x in the coalescing-tree order. With strict_right
// the right-arm boundary is excluded: landing exactly on the arm is a
// sub-resolution coincidence, and the continuum tree laws hold strictly
// there.
bool is_ancestor(const BranchPoint& x, const GridPoint& y, const ArgmaxMaps& maps,
                 bool strict_right = false);

struct ChildResult {
  std::optional<BranchPoint> child;
  bool truncated = false;   // scan left the window before finding the branch
  bool degenerate = false;  // the level below ascends immediately (double vertical)
};

// The unique branch point one level down: walk tauL leftward from x.index
// past the run of nodes whose geodesics still reach x's lateral shadow, then
// to the first node that ascends.
ChildResult child(const BranchPoint& x, const ArgmaxMaps& maps);

struct ShockTree {
  ShockSet set;
  std::vector<int> child_of;        // index into set.shocks, -1 when absent
  std::vector<char> child_truncated;
  std::vector<BranchPoint> child_raw;  // child location even when outside the set

  int edge_count() const {
    int c = 0;
    for (int v : child_of) c += v >= 0;
    return c;
  }
};

ShockTree build_tree(const ShockSet& set, const ArgmaxMaps& maps);

enum class ShockClass { OnlyA, OnlyB, Both };

struct ClassifiedShocks {
  std::vector<BranchPoint> only_a;  // detected at the low-direction surrogate only
  std::vector<BranchPoint> only_b;  // detected at the high-direction surrogate only
  std::vector<BranchPoint> both_a;  // matched pairs, positions from set A
  std::vector<BranchPoint> both_b;
};

ClassifiedShocks classify(const ShockSet& set_a, const ShockSet& set_b, int match_radius);

void export_shocks_json(const ShockSet& set, const FieldSpec& spec, const std::string& path,
                        const std::string& side_label);
void export_shock_tree_svg(const ShockTree& tree, const ClassifiedShocks* classes,
                           const FieldSpec& spec, int match_radius, const std::string& path);

}  // namespace blpp
