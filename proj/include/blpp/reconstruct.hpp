#pragma once

#include <string>
#include <vector>

#include "blpp/instability.hpp"
#include "blpp/shocks.hpp"

namespace blpp {

// Rebuild of the instability graph's horizontal intervals and countably many
// vertical edges from the two classified shock sets alone. Elements carry
// which construction step produced them.
struct SkeletonInterval {
  int dual_level = 0;
  int left = 0;
  int right = 0;
  bool open = false;  // no closing shock found before the next mark / window end
};

struct SkeletonEdge {
  int level = 0;  // spans dual levels level - 1/2 .. level + 1/2
  int index = 0;
};

struct Skeleton {
  std::vector<SkeletonInterval> intervals;  // step 1 marks + step 2 closers
  std::vector<SkeletonEdge> edges;          // step 3 leftovers
};

// Step 1: every solely-high-direction shock (m, s) marks a left endpoint at
// (m + 1/2, s). Step 2: the rightmost solely-low-direction shock on level
// m+1, right of the mark and left of the next mark (window end as sentinel),
// closes the interval. Step 3: each remaining solely-low shock carries a
// vertical edge.
Skeleton reconstruct_skeleton(const std::vector<BranchPoint>& only_high,
                              const std::vector<BranchPoint>& only_low, int grid_nodes);

struct SkeletonScore {
  long graph_intervals = 0;
  long matched_intervals = 0;       // both endpoints within the node tolerance
  long skeleton_intervals = 0;
  long skeleton_intervals_matched = 0;
  long right_isolated_edges = 0;
  long recalled_edges = 0;
  bool hausdorff_bulk_excluded = true;  // non-right-isolated edges are out of scope
  double interval_recall() const {
    return graph_intervals ? double(matched_intervals) / double(graph_intervals) : 1.0;
  }
  double interval_precision() const {
    return skeleton_intervals ? double(skeleton_intervals_matched) / double(skeleton_intervals)
                              : 1.0;
  }
  double edge_recall() const {
    return right_isolated_edges ? double(recalled_edges) / double(right_isolated_edges) : 1.0;
  }
};

// Endpoint matching within node_tol grid nodes; edge recall is restricted to
// right-isolated edges, the only ones recoverable from countably many shocks.
SkeletonScore compare_graphs(const Skeleton& skeleton, const InstabilityGraph& graph,
                             int node_tol, int iso_gap = 1);

void export_skeleton_json(const Skeleton& skeleton, const FieldSpec& spec,
                          const std::string& path);
void export_overlay_svg(const Skeleton& skeleton, const InstabilityGraph& graph,
                        const FieldSpec& spec, const std::string& path);

}  // namespace blpp
