#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blpp/geodesics.hpp"
#include "blpp/shocks.hpp"

namespace blpp {

// Vertical instability element detected on primal level `level`: the edge
// spans dual levels level - 1/2 .. level + 1/2 at the grid cell [cell, cell+1]
// where the two-direction reverse-profile difference strictly increases.
struct InstabilityEdge {
  int level = 0;
  int cell = 0;
  double increase = 0.0;
};

// Maximal run of proper points on dual level `dual_level` + 1/2, stored by
// the node range [left, right] where the vertical-increment gap is strictly
// positive. The improper interval endpoints sit within one node outside.
struct InstabilityInterval {
  int dual_level = 0;  // the interval lives on dual_level + 1/2
  int left = 0;
  int right = 0;
  bool left_edge_found = false;   // a down edge lands at the left endpoint
  bool right_edge_found = false;  // an up edge leaves the right endpoint
};

struct InstabilityGraph {
  double gamma_eff = 0.0, delta_eff = 0.0, tol = 1e-9;
  int level_lo = 0, level_hi = 0;  // primal levels scanned for edges
  std::vector<InstabilityEdge> edges;          // sorted by (level, cell)
  std::vector<InstabilityInterval> intervals;  // sorted by (dual_level, left)
  std::vector<std::vector<int>> interval_down_edges;  // edge ids on level m
  std::vector<std::vector<int>> interval_up_edges;    // edge ids on level m+1

  bool has_edge(int level, int cell) const;
  // Membership of the dual point (dual_level + 1/2, node): inside an
  // interval or at the endpoint of an adjacent vertical edge.
  bool on_graph(int dual_level, int node) const;
  const InstabilityInterval* interval_at(int dual_level, int node) const;
};

// Per level m the difference D_m = w_delta - w_gamma is nondecreasing up to
// roundoff (same-horizon crossing inequality); edges are the cells where it
// strictly increases beyond tol.
std::vector<InstabilityEdge> detect_edges(const ReverseProfile& w_gamma,
                                          const ReverseProfile& w_delta, double tol, int level_lo,
                                          int level_hi, int col_lo, int col_hi,
                                          double* worst_decrease = nullptr);

// proper(m, i) <=> vertical_increment(w_delta, m, i) - vertical_increment(w_gamma, m, i) > tol.
std::vector<std::vector<char>> detect_proper_points(const ReverseProfile& w_gamma,
                                                    const ReverseProfile& w_delta, double tol,
                                                    int dual_lo, int dual_hi, int col_lo,
                                                    int col_hi);

InstabilityGraph assemble_graph(const ReverseProfile& w_gamma, const ReverseProfile& w_delta,
                                double tol, int level_lo, int level_hi, int col_lo, int col_hi);

struct AgreementReport {
  long samples = 0;
  long agreements = 0;
  long positives_analytic = 0;
  long positives_geometric = 0;
  double fraction() const { return samples ? double(agreements) / double(samples) : 1.0; }
};

// Edge at (m, t) versus: the rightmost high-direction geodesic and leftmost
// low-direction geodesic from (m, t) separate immediately and never meet
// again within the horizon.
AgreementReport geometric_edge_check(const InstabilityGraph& graph, const ArgmaxMaps& maps_gamma,
                                     const ArgmaxMaps& maps_delta,
                                     const std::vector<GridPoint>& samples, int stop_level);

// Instability point at (m + 1/2, t) versus: the rightmost high-direction
// geodesic from (m, t) and leftmost low-direction geodesic from (m+1, t)
// are disjoint within the horizon.
AgreementReport geometric_point_check(const InstabilityGraph& graph, const ArgmaxMaps& maps_gamma,
                                      const ArgmaxMaps& maps_delta,
                                      const std::vector<GridPoint>& samples, int stop_level);

struct EquivalenceReport {
  AgreementReport two_point;       // D_m(t+d) > D_{m+1}(t-d)
  AgreementReport horizontal_up;   // level m+1 increase OR proper at t+d
  AgreementReport horizontal_down; // level m increase OR proper at t-d
};

EquivalenceReport instability_equivalence_check(const ReverseProfile& w_gamma,
                                                const ReverseProfile& w_delta,
                                                const InstabilityGraph& graph,
                                                const std::vector<GridPoint>& dual_samples);

struct DualPoint {
  int dual_level = 0;
  int node = 0;
};

struct GraphSearchResult {
  std::optional<DualPoint> point;
  bool truncated = false;
};

GraphSearchResult find_common_ancestor(const InstabilityGraph& graph, DualPoint x, DualPoint y);
GraphSearchResult find_common_descendant(const InstabilityGraph& graph, DualPoint x, DualPoint y);

struct NestingViolations {
  long edge_violations = 0;
  long interval_violations = 0;
  long edges_checked = 0;
  long intervals_checked = 0;
};

// inner parameters within outer's => the inner graph must be contained.
NestingViolations graph_nesting_check(const InstabilityGraph& inner,
                                      const InstabilityGraph& outer, int node_radius);

struct BoxCountFit {
  double slope = 0.0;
  int scales = 0;
};

// Least-squares slope of log N(r) against log(1/r) over halving scales in
// [r_min, r_max].
BoxCountFit boxcount_dimension(std::vector<double> times, double r_min, double r_max);

void export_graph_json(const InstabilityGraph& graph, const FieldSpec& spec,
                       const std::string& path);
void export_graph_svg(const InstabilityGraph& graph, const FieldSpec& spec,
                      const std::string& path);

}  // namespace blpp
