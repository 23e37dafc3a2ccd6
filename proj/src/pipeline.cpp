#include "blpp/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace blpp {

FieldSpec window_spec(int levels, double time_max, double delta, std::uint64_t seed, double pad) {
  FieldSpec spec;
  spec.level_min = 0;
  spec.level_max = levels;
  spec.delta = delta;
  spec.seed = seed;
  const long long lo = std::llround(std::ceil(pad / delta));
  const long long hi = std::llround(std::ceil((time_max + pad) / delta));
  spec.t_min = -static_cast<double>(lo) * delta;
  spec.t_max = static_cast<double>(hi) * delta;
  return spec;
}

RunParams run_params_from(const RunConfig& config, std::uint64_t seed, int horizon) {
  RunParams params;
  params.delta = config.field.delta;
  params.seed = seed;
  params.horizon = horizon;
  params.gamma = config.gamma;
  params.delta_dir = config.delta_dir;
  params.eta_factor = config.eta_factor;
  params.tol = config.tol;
  params.eps_factor = config.eps_factor;
  params.match_radius = config.match_radius;
  params.probe_level_frac = config.probe_level_frac;
  return params;
}

TwoSidedRun run_two_sided(const RunParams& p) {
  const double dir_low = p.gamma * (1.0 - p.eta_factor);
  const double dir_high = p.delta_dir * (1.0 + p.eta_factor);
  const FieldSpec spec = window_spec(p.horizon, dir_high * p.horizon, p.delta, p.seed, p.pad);

  TwoSidedRun run;
  run.field = generate_field(spec);
  run.w_low = reverse_profile(run.field, make_target(spec, p.horizon, dir_low));
  run.w_high = reverse_profile(run.field, make_target(spec, p.horizon, dir_high));
  run.maps_low = argmax_maps(run.field, run.w_low, -1);
  run.maps_high = argmax_maps(run.field, run.w_high, +1);

  run.probe_level_hi = std::max(2, static_cast<int>(p.horizon * p.probe_level_frac));
  run.col_lo = spec.zero_index();
  // Keep probes well inside the narrower cone.
  run.col_hi = std::min(run.w_low.target.target_index,
                        spec.index_of(0.75 * run.w_low.target.theta_eff * p.horizon));
  run.stop_level = default_truncation_level(run.w_low.target, spec.level_min);
  run.eps = default_shock_eps(spec, p.eps_factor);

  run.graph = assemble_graph(run.w_low, run.w_high, p.tol, 0, run.probe_level_hi + 1, run.col_lo,
                             run.col_hi);
  const auto branches_low =
      detect_branches(run.maps_low, 0, run.probe_level_hi + 1, run.col_lo, run.col_hi);
  const auto branches_high =
      detect_branches(run.maps_high, 0, run.probe_level_hi + 1, run.col_lo, run.col_hi);
  run.shocks_low = shock_set(branches_low, run.maps_low, run.eps);
  run.shocks_high = shock_set(branches_high, run.maps_high, run.eps);
  run.classes = classify(run.shocks_low, run.shocks_high, p.match_radius);
  return run;
}

}  // namespace blpp
