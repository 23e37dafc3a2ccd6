#pragma once

#include <string>
#include <vector>

#include "blpp/instability.hpp"
#include "blpp/lpp.hpp"

namespace blpp {

// Dual boundary separating targets reached through (m+1, s) from targets
// reached only by first moving right on level m. Jump times sigma_m..sigma_N
// are node indices; sigma_m = root index.
struct CompetitionInterface {
  GridPoint root;  // primal root (m, s); the interface starts at (m + 1/2, s)
  Side side = Side::Right;
  std::vector<int> sigma;
  bool degenerate = false;

  int top_level() const { return root.level + static_cast<int>(sigma.size()) - 1; }
  int sigma_at(int level) const { return sigma[static_cast<std::size_t>(level - root.level)]; }
};

// F0 = profile from (m, s), F1 = profile from (m+1, s); on each level the
// equality set {F1 == F0} is a down-set in time and sigma_n is its right
// boundary. Equality is tested exactly first because both profiles are
// max/plus functions of the same field; the tol fallback covers the rare
// cases where the shared optimum is reached along different groupings.
CompetitionInterface trace_cif(const BrownianField& field, GridPoint root, Side side, int levels,
                               double tol = 1e-9);

struct DirectionEstimate {
  GridPoint root;
  double theta_left = 0.0;
  double theta_right = 0.0;
  bool degenerate = false;
};

DirectionEstimate estimate_directions(const BrownianField& field, GridPoint root, int levels);

double direction_from(const CompetitionInterface& cif, const FieldSpec& spec);

struct CifConsistencyReport {
  long shocks_checked = 0;
  long shocks_inside_band = 0;
  long controls_checked = 0;
  long controls_outside_band = 0;
  double shock_fraction() const {
    return shocks_checked ? double(shocks_inside_band) / double(shocks_checked) : 1.0;
  }
  double control_fraction() const {
    return controls_checked ? double(controls_outside_band) / double(controls_checked) : 1.0;
  }
};

// Shock roots must have the probing direction inside [theta_R - band,
// theta_L + band]; sampled non-shock control points should fall outside.
CifConsistencyReport cif_shock_consistency(const BrownianField& field, const ShockSet& shocks,
                                           const std::vector<GridPoint>& controls,
                                           double direction, double band, int levels,
                                           std::size_t max_shocks = 64);

struct CifEdgeReport {
  AgreementReport edge_vs_band;
  long left_endpoints_checked = 0;
  long left_endpoints_r_split_only = 0;
  long interior_minus_checked = 0;
  long interior_minus_l_split_only = 0;
  long no_shock_edges_checked = 0;
  long no_shock_edges_symmetric = 0;
};

// Edge at (m, t) <=> [gamma_eff, delta_eff] intersects the cif direction
// band at the root (m + 1/2, t); the split trichotomy below an interval is
// recovered by pairing the two surrogate-direction geodesic maps.
CifEdgeReport cif_edge_correspondence(const BrownianField& field, const InstabilityGraph& graph,
                                      const ArgmaxMaps& maps_gamma, const ArgmaxMaps& maps_delta,
                                      const ClassifiedShocks& classes,
                                      const std::vector<GridPoint>& samples, double band,
                                      int levels);

void export_cif_csv(const CompetitionInterface& cif, const FieldSpec& spec,
                    const std::string& path);
void export_directions_json(const std::vector<DirectionEstimate>& estimates,
                            const FieldSpec& spec, const std::string& path);

}  // namespace blpp
