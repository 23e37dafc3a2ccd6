#pragma once

#include <string>
#include <vector>

#include "blpp/field.hpp"
#include "blpp/grid.hpp"

namespace blpp {

// Far target (K, theta*K) with the target time snapped to the nearest grid
// node; theta_eff records the direction actually realized after snapping.
struct Target {
  int horizon_level = 0;
  double theta = 1.0;
  int target_index = 0;
  double theta_eff = 1.0;

  friend bool operator==(const Target& a, const Target& b) {
    return a.horizon_level == b.horizon_level && a.target_index == b.target_index;
  }
};

Target make_target(const FieldSpec& spec, int horizon_level, double theta);

// w(m, i) = L_{(m, t_i), (K, theta K)}: passage time from every grid point to
// the common far target. Differences of w realize finite-horizon Busemann
// estimates with an exact cocycle. Entries right of the target time are -inf.
struct ReverseProfile {
  Target target;
  int base_level = 0;
  LevelMatrix w;

  double at(int level, int index) const { return w(level - base_level, index); }
  auto row(int level) const { return w.row(level - base_level); }

  bool feasible(GridPoint p) const {
    return p.level >= base_level && p.level <= target.horizon_level &&
           p.index >= 0 && p.index <= target.target_index;
  }
};

// w_K(i) = B_K(b) - B_K(i); below, one right-to-left running-max scan per
// level: w_m(i) = -B_m(i) + max_{r >= i} (B_m(r) + w_{m+1}(r)).
ReverseProfile reverse_profile(const BrownianField& field, const Target& target);

struct BusemannEstimate {
  double value = 0.0;
  Target target;
  GridPoint x, y;
};

BusemannEstimate busemann_estimate(const ReverseProfile& w, GridPoint x, GridPoint y);

// D(i) = estimate((m, 0), (m, i)) over the feasible columns of level m.
ValueRow horizontal_profile(const ReverseProfile& w, int level);

double vertical_increment(const ReverseProfile& w, int level, int index);

struct ProbePair {
  GridPoint x, y;
};

struct StabilizationReport {
  double theta = 0.0;
  double eta = 0.0;
  std::vector<int> horizons;
  std::vector<ProbePair> probes;
  std::vector<std::vector<double>> values;  // values[p][h]
  std::vector<double> probe_drift;          // max |value(K_i) - value(K_last)|
  double max_drift = 0.0;
};

StabilizationReport stabilization_report(const BrownianField& field, double theta,
                                         const std::vector<ProbePair>& probes,
                                         const std::vector<int>& horizons);

void export_reverse_profile_csv(const ReverseProfile& w, const FieldSpec& spec,
                                const std::string& path);
void export_stabilization_json(const StabilizationReport& report, const FieldSpec& spec,
                               const std::string& path);

// Probe window: central time fraction and lowest level fraction of the field
// window, keeping probes away from the target cone boundary.
struct ProbeWindow {
  int level_lo = 0, level_hi = 0;
  int col_lo = 0, col_hi = 0;
};

ProbeWindow probe_window(const FieldSpec& spec, int horizon_level, double time_frac = 0.5,
                         double level_frac = 0.25);

}  // namespace blpp
