#pragma once

#include "blpp/cif.hpp"
#include "blpp/config.hpp"
#include "blpp/instability.hpp"
#include "blpp/reconstruct.hpp"

namespace blpp {

// One full two-direction run: field, reverse profiles and argmax maps at the
// low (gamma - eta) and high (delta + eta) surrogate directions, the
// instability graph between them, and the classified shock sets.
struct TwoSidedRun {
  BrownianField field;
  ReverseProfile w_low, w_high;
  ArgmaxMaps maps_low, maps_high;
  InstabilityGraph graph;
  ShockSet shocks_low, shocks_high;
  ClassifiedShocks classes;
  int probe_level_hi = 0;
  int col_lo = 0, col_hi = 0;
  int stop_level = 0;
  double eps = 0.0;
};

struct RunParams {
  double delta = 0.05;
  std::uint64_t seed = 1;
  int horizon = 200;
  double gamma = 0.8;
  double delta_dir = 1.2;
  double eta_factor = 0.05;
  double tol = 1e-9;
  double eps_factor = 3.0;
  int match_radius = 2;
  double probe_level_frac = 0.25;
  double pad = 10.0;
};

RunParams run_params_from(const RunConfig& config, std::uint64_t seed, int horizon);

FieldSpec window_spec(int levels, double time_max, double delta, std::uint64_t seed,
                      double pad = 10.0);

TwoSidedRun run_two_sided(const RunParams& params);

}  // namespace blpp
