#include "blpp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "blpp/enumeration.hpp"
#include "blpp/pipeline.hpp"

namespace blpp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", value);
  return buf;
}

int first_seeds(const RunConfig& config, int wanted) {
  return config.smoke ? 1 : std::min<int>(wanted, static_cast<int>(config.seeds.size()));
}

// ---------------------------------------------------------------------------
// 1. Running-max recursions against exhaustive enumeration on small grids.

CheckResult check_dp_oracle(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"dp.oracle",
                     "profiles and the initial-condition solver match exhaustive enumeration",
                     true};
  const auto start = Clock::now();
  std::mt19937_64 rng(config.seeds.front() * 1000003ULL + 17);
  const int instances = config.smoke ? 20 : 100;
  double max_diff = 0.0;
  for (int it = 0; it < instances; ++it) {
    FieldSpec spec;
    spec.level_min = 0;
    spec.level_max = 1 + static_cast<int>(rng() % 3);
    spec.delta = 0.25;
    const int lo = 2 + static_cast<int>(rng() % 6);
    const int hi = 4 + static_cast<int>(rng() % 8);
    spec.t_min = -lo * spec.delta;
    spec.t_max = hi * spec.delta;
    spec.seed = rng();
    const BrownianField field = generate_field(spec);
    const int nodes = spec.nodes();
    const int n = spec.level_max;

    const GridPoint origin{0, static_cast<int>(rng() % (nodes / 2))};
    const ForwardProfile fwd = forward_profile(field, origin, n);
    for (int k = 0; k <= n; ++k)
      for (int i = origin.index; i < nodes; ++i)
        max_diff = std::max(max_diff, std::abs(fwd.at(k, i) - reference::last_passage(
                                                                  field, 0, origin.index, k, i)));

    const int b = nodes - 1 - static_cast<int>(rng() % 2);
    Target target;
    target.horizon_level = n;
    target.target_index = b;
    target.theta_eff = spec.time_at(b) / std::max(1, n);
    const ReverseProfile rev = reverse_profile(field, target);
    for (int m = 0; m <= n; ++m)
      for (int i = 0; i <= b; ++i)
        max_diff = std::max(
            max_diff, std::abs(rev.at(m, i) - reference::last_passage(field, m, i, n, b)));

    ValueRow phi(nodes);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < nodes; ++i) phi(i) = uni(rng);
    const int tb = nodes / 2 + static_cast<int>(rng() % (nodes / 2));
    const double got = solve_initial_condition(field, 0, phi, n, tb);
    max_diff = std::max(max_diff, std::abs(got - reference::point_to_level(field, 0, phi, n, tb)));
  }
  result.seconds = seconds_since(start);
  result.passed = max_diff <= 1e-9 && result.seconds < 5.0;
  result.detail = "instances=" + std::to_string(instances) + " max_diff=" + format(max_diff) +
                  " time=" + format(result.seconds) + "s";
  return result;
}

// ---------------------------------------------------------------------------
// 2. Telescoping of reverse-profile differences.

CheckResult check_cocycle(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"busemann.cocycle", "estimate(x,y) + estimate(y,z) = estimate(x,z)", true};
  const auto start = Clock::now();
  const int seeds = first_seeds(config, 3);
  const int horizon = config.smoke ? 60 : 150;
  double max_defect = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const FieldSpec spec =
        window_spec(horizon, 1.0 * horizon, config.field.delta, config.seeds[s]);
    const BrownianField field = generate_field(spec);
    const ReverseProfile w = reverse_profile(field, make_target(spec, horizon, 1.0));
    std::mt19937_64 rng(config.seeds[s] ^ 0xc0c0c1e5ULL);
    const int b = w.target.target_index;
    auto probe = [&]() {
      return GridPoint{static_cast<int>(rng() % (horizon / 2)),
                       static_cast<int>(rng() % (3 * b / 4))};
    };
    for (int t = 0; t < 1000; ++t) {
      const GridPoint x = probe(), y = probe(), z = probe();
      const double defect = busemann_estimate(w, x, y).value + busemann_estimate(w, y, z).value -
                            busemann_estimate(w, x, z).value;
      max_defect = std::max(max_defect, std::abs(defect));
    }
  }
  result.seconds = seconds_since(start);
  result.passed = max_defect <= 1e-9 && result.seconds < 1.0 * seeds + 2.0;
  result.detail = "triples=" + std::to_string(1000 * seeds) + " max_defect=" + format(max_defect);
  return result;
}

// ---------------------------------------------------------------------------
// 3. Same-horizon crossing inequality across directions.

CheckResult check_monotonicity(const RunConfig& config, const VerifyOptions& options) {
  CheckResult result{"busemann.monotonicity",
                     "horizontal estimates nonincreasing and vertical increments nondecreasing "
                     "in the direction",
                     true};
  const auto start = Clock::now();
  const std::vector<double> thetas = {0.6, 1.0, 1.6};
  const int horizon = config.smoke ? 80 : 200;
  const int seeds = first_seeds(config, 2);
  long violations = 0;
  long cells = 0;
  double worst_seed_time = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto seed_start = Clock::now();
    const FieldSpec spec =
        window_spec(horizon, thetas.back() * horizon, config.field.delta, config.seeds[s]);
    const BrownianField field = generate_field(spec);
    std::vector<ReverseProfile> w;
    for (double theta : thetas)
      w.push_back(reverse_profile(field, make_target(spec, horizon, theta)));

    int min_b = w.front().target.target_index;
    for (const auto& profile : w) min_b = std::min(min_b, profile.target.target_index);
    const int col_lo = spec.zero_index();
    const int col_hi = min_b - std::max(4, min_b / 10);
    const int level_hi = std::max(2, horizon / 4);

    for (std::size_t a = 0; a + 1 < w.size(); ++a) {
      for (std::size_t c = a + 1; c < w.size(); ++c) {
        for (int m = 0; m <= level_hi; ++m) {
          for (int i = col_lo; i < col_hi; ++i) {
            // E = W_theta - W_theta' must be nonincreasing in time.
            const double e0 = w[a].at(m, i) - w[c].at(m, i);
            const double e1 = w[a].at(m, i + 1) - w[c].at(m, i + 1);
            violations += e1 - e0 > 1e-9;
            // Vertical increments ordered the other way.
            const double va = w[a].at(m, i) - w[a].at(m + 1, i);
            const double vc = w[c].at(m, i) - w[c].at(m + 1, i);
            violations += va - vc > 1e-9;
            cells += 2;
          }
        }
      }
    }
    worst_seed_time = std::max(worst_seed_time, seconds_since(seed_start));
  }
  if (options.inject_fault) {
    violations += 1;
    result.detail = "injected fault; ";
  }
  result.seconds = seconds_since(start);
  result.passed = violations == 0 && worst_seed_time < 30.0;
  result.detail += "cells=" + std::to_string(cells) + " violations=" + std::to_string(violations) +
                   " worst_seed_time=" + format(worst_seed_time) + "s";
  return result;
}

// ---------------------------------------------------------------------------
// 4. Backtracked point geodesics never take two consecutive vertical steps.

CheckResult check_no_double_vertical(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"geodesic.no-double-vertical",
                     "every backtracked path with a repeated jump time carries the degenerate "
                     "flag; the flagged rate is reported",
                     true};
  const auto start = Clock::now();
  const int seeds = config.smoke ? 2 : 20;
  long paths = 0, violations = 0, flagged = 0;
  for (int s = 0; s < seeds; ++s) {
    FieldSpec spec = window_spec(24, 40.0, 0.05, config.seeds.front() + 101 * s, 8.0);
    const BrownianField field = generate_field(spec);
    std::mt19937_64 rng(config.seeds.front() * 31 + s);
    const int nodes = spec.nodes();
    for (int o = 0; o < 20; ++o) {
      const GridPoint x{0, static_cast<int>(rng() % (nodes / 8))};
      for (int t = 0; t < 13; ++t) {
        const int span = 1 + static_cast<int>(rng() % (nodes - x.index - 2));
        const GridPoint y{24, x.index + span};
        for (Side side : {Side::Left, Side::Right}) {
          const UpRightPath path = point_geodesic(field, x, y, side);
          if (x.index == y.index) continue;  // pure vertical input
          ++paths;
          flagged += path.degenerate;
          violations += path.has_double_vertical() && !path.degenerate;
        }
      }
    }
  }
  result.seconds = seconds_since(start);
  result.passed = violations == 0 && paths >= (config.smoke ? 500 : 10000);
  result.detail = "paths=" + std::to_string(paths) +
                  " unflagged_violations=" + std::to_string(violations) +
                  " flagged_rate=" + format(paths ? double(flagged) / paths : 0.0);
  return result;
}

// ---------------------------------------------------------------------------
// 5. Geodesic ordering and split-at-origin.

CheckResult check_geodesic_ordering(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"geodesic.ordering",
                     "leftmost/rightmost and direction ordering of traced geodesics; unequal "
                     "geodesics from one origin differ in the first jump",
                     true};
  const auto start = Clock::now();
  const int seeds = first_seeds(config, 2);
  const int horizon = config.smoke ? 80 : 200;
  long violations = 0, pairs = 0;
  for (int s = 0; s < seeds; ++s) {
    const double theta = 1.0;
    const double lo_dir = theta * (1.0 - config.eta_factor);
    const double hi_dir = theta * (1.0 + config.eta_factor);
    const FieldSpec spec =
        window_spec(horizon, hi_dir * horizon, config.field.delta, config.seeds[s]);
    const BrownianField field = generate_field(spec);
    const ReverseProfile w_lo = reverse_profile(field, make_target(spec, horizon, lo_dir));
    const ReverseProfile w_hi = reverse_profile(field, make_target(spec, horizon, hi_dir));
    const ArgmaxMaps maps_lo = argmax_maps(field, w_lo, -1);
    const ArgmaxMaps maps_hi = argmax_maps(field, w_hi, +1);
    const int stop = default_truncation_level(w_lo.target, 0);
    const int col_hi = spec.index_of(0.6 * w_lo.target.theta_eff * horizon);

    std::mt19937_64 rng(config.seeds[s] ^ 0x0ddba11ULL);
    auto leq = [](const std::vector<int>& a, const std::vector<int>& b) {
      for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
        if (a[k] > b[k]) return false;
      return true;
    };
    for (int t = 0; t < 1000; ++t) {
      const int level = static_cast<int>(rng() % (horizon / 2));
      int i = static_cast<int>(rng() % col_hi);
      int j = static_cast<int>(rng() % col_hi);
      if (i == j) j = i + 1;
      if (i > j) std::swap(i, j);
      ++pairs;
      const auto r_i = trace_jump_indices(maps_lo, {level, i}, Side::Right, stop);
      const auto l_j = trace_jump_indices(maps_lo, {level, j}, Side::Left, stop);
      violations += !leq(r_i, l_j);  // R from left point stays left of L from right point
      const auto l_i = trace_jump_indices(maps_lo, {level, i}, Side::Left, stop);
      violations += !leq(l_i, r_i);  // L <= R from one point
      const auto l_i_hi = trace_jump_indices(maps_hi, {level, i}, Side::Left, stop);
      const auto r_i_hi = trace_jump_indices(maps_hi, {level, i}, Side::Right, stop);
      violations += !leq(l_i, l_i_hi);  // lower direction stays left, same side
      violations += !leq(r_i, r_i_hi);
      if (l_i != r_i && l_i[1] == r_i[1]) ++violations;  // split must happen at the origin
    }
  }
  result.seconds = seconds_since(start);
  result.passed = violations == 0;
  result.detail = "pairs=" + std::to_string(pairs) + " violations=" + std::to_string(violations);
  return result;
}

// ---------------------------------------------------------------------------
// 6. Shock tree laws at the default 512-level window.

CheckResult check_shock_tree(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"shocks.tree-laws",
                     "unique monotone child, no same-level descent, total order of descendants, "
                     "common descendants within the window",
                     true};
  const auto start = Clock::now();
  const int horizon = config.smoke ? 128 : 512;
  const double delta = 0.1;
  const double theta = 1.0;
  const FieldSpec spec = window_spec(horizon, theta * horizon, delta, config.seeds.front());
  const BrownianField field = generate_field(spec);
  const ReverseProfile w = reverse_profile(field, make_target(spec, horizon, theta));
  const ArgmaxMaps maps = argmax_maps(field, w, 0);
  const int level_hi = default_truncation_level(w.target, 0);
  const int col_lo = spec.zero_index();
  const int col_hi = spec.index_of(0.75 * w.target.theta_eff * horizon);
  const auto branches = detect_branches(maps, 1, level_hi, col_lo, col_hi);
  const ShockSet set = shock_set(branches, maps, default_shock_eps(spec, config.eps_factor));

  long unique_violations = 0, monotone_violations = 0, same_level_violations = 0,
       order_violations = 0;
  std::map<int, std::vector<const BranchPoint*>> by_level;
  for (const auto& s : set.shocks) by_level[s.level].push_back(&s);

  const ShockTree tree = build_tree(set, maps);
  for (std::size_t k = 0; k < set.shocks.size(); ++k) {
    const auto& x = set.shocks[k];
    if (x.level == 0) continue;
    // Exhaustive uniqueness: in-set candidates on the level below that have
    // x strictly inside their arms (boundary landings are sub-resolution).
    int candidates = 0;
    const BranchPoint* candidate = nullptr;
    const auto it = by_level.find(x.level - 1);
    if (it != by_level.end()) {
      for (const auto* y : it->second) {
        if (is_ancestor(*y, {x.level, x.index}, maps, true)) {
          ++candidates;
          candidate = y;
        }
      }
    }
    if (candidates >= 2) ++unique_violations;
    if (candidates == 1 && tree.child_of[k] >= 0 &&
        set.shocks[static_cast<std::size_t>(tree.child_of[k])].index != candidate->index)
      ++unique_violations;
  }
  // Child map monotone per level.
  for (const auto& [level, shocks] : by_level) {
    int last = -1;
    for (const auto* s : shocks) {
      const ChildResult res = child(*s, maps);
      if (!res.child) continue;
      if (res.child->index < last) ++monotone_violations;
      last = res.child->index;
    }
  }
  // No same-level descent, both orientations, capped sample.
  long same_level_pairs = 0;
  for (const auto& [level, shocks] : by_level) {
    for (std::size_t a = 0; a + 1 < shocks.size() && same_level_pairs < 20000; ++a) {
      for (std::size_t b = a + 1; b < shocks.size() && same_level_pairs < 20000; ++b) {
        ++same_level_pairs;
        if (is_ancestor(*shocks[a], {shocks[b]->level, shocks[b]->index}, maps, true))
          ++same_level_violations;
        if (is_ancestor(*shocks[b], {shocks[a]->level, shocks[a]->index}, maps, true))
          ++same_level_violations;
      }
    }
  }
  // Total order of descendants of a common shock.
  long order_checked = 0;
  for (std::size_t k = 0; k < set.shocks.size() && order_checked < 2000; ++k) {
    const auto& z = set.shocks[k];
    if (z.level < 4) continue;
    std::vector<const BranchPoint*> descendants;
    for (int below = 1; below <= 3; ++below) {
      const auto it = by_level.find(z.level - below);
      if (it == by_level.end()) continue;
      for (const auto* y : it->second)
        if (is_ancestor(*y, {z.level, z.index}, maps, true)) descendants.push_back(y);
    }
    for (std::size_t a = 0; a + 1 < descendants.size(); ++a) {
      for (std::size_t b = a + 1; b < descendants.size(); ++b) {
        ++order_checked;
        const auto* x = descendants[a];
        const auto* y = descendants[b];
        if (x->level == y->level) continue;  // covered by the same-level law
        const auto* lower = x->level < y->level ? x : y;
        const auto* upper = x->level < y->level ? y : x;
        if (!is_ancestor(*lower, {upper->level, upper->index}, maps)) ++order_violations;
      }
    }
  }
  std::mt19937_64 rng(config.seeds.front() ^ 0x7ee5ULL);
  // Common SW descendant through child chains.
  long resolved = 0, sampled = 0;
  const int pair_target = config.smoke ? 50 : 400;
  std::vector<const BranchPoint*> upper;
  for (const auto& s : set.shocks)
    if (s.level >= horizon / 2) upper.push_back(&s);
  auto descend = [&](const BranchPoint& from, int to_level) {
    BranchPoint cur = from;
    while (cur.level > to_level) {
      const ChildResult res = child(cur, maps);
      if (!res.child) return std::optional<BranchPoint>{};
      cur = *res.child;
    }
    return std::optional<BranchPoint>{cur};
  };
  if (upper.size() >= 2) {
    for (int t = 0; t < pair_target; ++t) {
      const auto* a = upper[rng() % upper.size()];
      const auto* b = upper[rng() % upper.size()];
      if (a == b) continue;
      ++sampled;
      BranchPoint ca = *a, cb = *b;
      bool met = false, lost = false;
      while (!met && !lost && (ca.level > 0 || cb.level > 0)) {
        const int target_level = std::min(ca.level, cb.level) - (ca.level == cb.level ? 1 : 0);
        if (target_level < 0) break;
        auto na = descend(ca, target_level);
        auto nb = descend(cb, target_level);
        if (!na || !nb) {
          lost = true;
          break;
        }
        ca = *na;
        cb = *nb;
        met = ca.index == cb.index;
      }
      resolved += met;
    }
  }
  const double resolved_frac = sampled ? double(resolved) / double(sampled) : 1.0;

  result.seconds = seconds_since(start);
  result.passed = unique_violations == 0 && monotone_violations == 0 &&
                  same_level_violations == 0 && order_violations == 0 && resolved_frac >= 0.95;
  std::ostringstream detail;
  detail << "shocks=" << set.shocks.size() << " unique_v=" << unique_violations
         << " monotone_v=" << monotone_violations << " same_level_v=" << same_level_violations
         << " order_v=" << order_violations << " common_descendant=" << format(resolved_frac)
         << " (pairs=" << sampled << ")";
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 7. Shock classes against the instability graph, with a refinement trend.

struct CorrespondenceStats {
  double left_endpoint = 1.0;
  double interior_minus = 1.0;
  double outside_both = 1.0;
};

CorrespondenceStats correspondence_stats(const TwoSidedRun& run, int radius) {
  CorrespondenceStats stats;
  long iv_total = 0, iv_hit = 0;
  for (const auto& iv : run.graph.intervals) {
    if (iv.right - iv.left < 1) continue;
    ++iv_total;
    bool hit = false;
    for (const auto& s : run.classes.only_b)
      if (s.level == iv.dual_level && std::abs(s.index - iv.left) <= radius) hit = true;
    iv_hit += hit;
  }
  if (iv_total) stats.left_endpoint = double(iv_hit) / double(iv_total);

  long interior_total = 0, interior_hit = 0;
  for (const auto& s : run.classes.only_a) {
    const auto* iv = run.graph.interval_at(s.level, s.index);
    if (!iv || s.index <= iv->left || s.index >= iv->right) continue;
    ++interior_total;
    bool on_edge = false;
    for (int c = s.index - radius; c <= s.index + radius; ++c)
      on_edge = on_edge || run.graph.has_edge(s.level, c);
    interior_hit += on_edge;
  }
  if (interior_total) stats.interior_minus = double(interior_hit) / double(interior_total);

  long outside_total = 0, outside_both = 0;
  auto tally = [&](const std::vector<BranchPoint>& shocks, bool is_both) {
    for (const auto& s : shocks) {
      if (run.graph.on_graph(s.level, s.index)) continue;
      ++outside_total;
      outside_both += is_both;
    }
  };
  tally(run.classes.only_a, false);
  tally(run.classes.only_b, false);
  tally(run.classes.both_a, true);
  if (outside_total) stats.outside_both = double(outside_both) / double(outside_total);
  return stats;
}

CheckResult check_shock_graph_correspondence(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"shocks.graph-correspondence",
                     "high-side shocks under interval left endpoints, interior low-side shocks "
                     "on edges, off-graph shocks in both sets; nondecreasing under refinement",
                     true};
  const auto start = Clock::now();
  const std::vector<double> resolutions = config.smoke ? std::vector<double>{0.05}
                                                       : std::vector<double>{0.05, 0.025};
  const int seeds = first_seeds(config, 5);
  std::vector<CorrespondenceStats> means;
  for (double res : resolutions) {
    CorrespondenceStats mean{0, 0, 0};
    for (int s = 0; s < seeds; ++s) {
      RunParams params = run_params_from(config, config.seeds[s], config.smoke ? 100 : 200);
      params.delta = res;
      const TwoSidedRun run = run_two_sided(params);
      const CorrespondenceStats stats = correspondence_stats(run, config.match_radius);
      mean.left_endpoint += stats.left_endpoint / seeds;
      mean.interior_minus += stats.interior_minus / seeds;
      mean.outside_both += stats.outside_both / seeds;
    }
    means.push_back(mean);
  }
  const auto& coarse = means.front();
  bool ok = coarse.left_endpoint >= 0.9 && coarse.interior_minus >= 0.9 &&
            coarse.outside_both >= 0.9;
  bool trend = true;
  if (means.size() > 1) {
    const auto& fine = means.back();
    trend = fine.left_endpoint >= coarse.left_endpoint - 1e-9 &&
            fine.interior_minus >= coarse.interior_minus - 1e-9 &&
            fine.outside_both >= coarse.outside_both - 1e-9;
  }
  result.seconds = seconds_since(start);
  result.passed = ok && trend;
  std::ostringstream detail;
  detail << "coarse: left=" << format(coarse.left_endpoint)
         << " interior=" << format(coarse.interior_minus)
         << " outside=" << format(coarse.outside_both);
  if (means.size() > 1)
    detail << " | fine: left=" << format(means.back().left_endpoint)
           << " interior=" << format(means.back().interior_minus)
           << " outside=" << format(means.back().outside_both) << " trend=" << (trend ? "ok" : "broken");
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 8. Analytic versus geodesic characterizations of the graph.

CheckResult check_analytic_vs_geometric(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"instability.analytic-vs-geometric",
                     "edge and point membership agree with geodesic separation/disjointness",
                     true};
  const auto start = Clock::now();
  const std::vector<double> resolutions = config.smoke ? std::vector<double>{0.05}
                                                       : std::vector<double>{0.05, 0.025};
  const int seeds = first_seeds(config, 3);
  std::vector<double> edge_means, point_means;
  for (double res : resolutions) {
    double edge_mean = 0, point_mean = 0;
    for (int s = 0; s < seeds; ++s) {
      RunParams params = run_params_from(config, config.seeds[s], config.smoke ? 100 : 200);
      params.delta = res;
      const TwoSidedRun run = run_two_sided(params);
      std::mt19937_64 rng(config.seeds[s] ^ 0x9e0d3eULL);
      std::vector<GridPoint> samples;
      for (int t = 0; t < (config.smoke ? 300 : 1500); ++t)
        samples.push_back(
            {static_cast<int>(rng() % static_cast<unsigned>(run.probe_level_hi)),
             run.col_lo + static_cast<int>(rng() % static_cast<unsigned>(run.col_hi - run.col_lo))});
      const AgreementReport edges = geometric_edge_check(run.graph, run.maps_low, run.maps_high,
                                                         samples, run.stop_level);
      const AgreementReport points = geometric_point_check(run.graph, run.maps_low, run.maps_high,
                                                           samples, run.stop_level);
      edge_mean += edges.fraction() / seeds;
      point_mean += points.fraction() / seeds;
    }
    edge_means.push_back(edge_mean);
    point_means.push_back(point_mean);
  }
  bool ok = edge_means.front() >= 0.9 && point_means.front() >= 0.9;
  bool trend = true;
  if (edge_means.size() > 1)
    trend = edge_means.back() >= edge_means.front() - 1e-9 &&
            point_means.back() >= point_means.front() - 1e-9;
  result.seconds = seconds_since(start);
  result.passed = ok && trend;
  std::ostringstream detail;
  detail << "edge=" << format(edge_means.front()) << " point=" << format(point_means.front());
  if (edge_means.size() > 1)
    detail << " | refined: edge=" << format(edge_means.back())
           << " point=" << format(point_means.back()) << " trend=" << (trend ? "ok" : "broken");
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 9. Skeleton reconstruction from the two shock sets.

CheckResult check_reconstruction(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"reconstruct.skeleton",
                     "interval endpoints recovered from shocks within 2 nodes; reconstructed "
                     "edges sit exactly on low-side shock times",
                     true};
  const auto start = Clock::now();
  const std::vector<double> resolutions = config.smoke ? std::vector<double>{0.05}
                                                       : std::vector<double>{0.05, 0.025};
  const int seeds = first_seeds(config, 5);
  std::vector<double> recalls;
  bool edges_exact = true;
  for (double res : resolutions) {
    double recall = 0;
    for (int s = 0; s < seeds; ++s) {
      RunParams params = run_params_from(config, config.seeds[s], config.smoke ? 100 : 200);
      params.delta = res;
      const TwoSidedRun run = run_two_sided(params);
      const Skeleton skeleton =
          reconstruct_skeleton(run.classes.only_b, run.classes.only_a, run.col_hi + 1);
      const SkeletonScore score = compare_graphs(skeleton, run.graph, 2, config.iso_gap);
      recall += score.interval_recall() / seeds;
      for (const auto& e : skeleton.edges) {
        bool on_shock = false;
        for (const auto& s2 : run.classes.only_a)
          on_shock = on_shock || (s2.level == e.level && s2.index == e.index);
        edges_exact = edges_exact && on_shock;
      }
    }
    recalls.push_back(recall);
  }
  const bool trend = recalls.size() < 2 || recalls.back() >= recalls.front() - 1e-9;
  result.seconds = seconds_since(start);
  result.passed = recalls.front() >= 0.9 && edges_exact && trend;
  std::ostringstream detail;
  detail << "interval_recall=" << format(recalls.front());
  if (recalls.size() > 1) detail << " refined=" << format(recalls.back());
  detail << " edges_on_shock_times=" << (edges_exact ? "yes" : "no")
         << " hausdorff_bulk_excluded=yes";
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 10. Box-count dimension, calibrated on Brownian zero sets first.

CheckResult check_boxcount(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"dimension.boxcount",
                     "box-count slope 1/2 for Brownian zero sets and edge-time sets", true};
  const auto start = Clock::now();
  const int seeds = config.smoke ? 4 : 20;

  double calib_mean = 0;
  const double zdelta = 1.0 / 64.0;
  for (int s = 0; s < seeds; ++s) {
    FieldSpec spec;
    spec.level_min = spec.level_max = 0;
    spec.delta = zdelta;
    spec.t_min = -zdelta;
    spec.t_max = 64.0;
    spec.seed = config.seeds.front() * 7919 + s;
    const BrownianField field = generate_field(spec);
    std::vector<double> zeros;
    const auto row = field.row(0);
    for (int i = spec.zero_index(); i + 1 < spec.nodes(); ++i)
      if (row(i) == 0.0 || (row(i) > 0) != (row(i + 1) > 0))
        zeros.push_back(spec.time_at(i) + zdelta / 2);
    calib_mean += boxcount_dimension(zeros, 4 * zdelta, 64.0 / 8.0).slope / seeds;
  }

  double edge_mean = 0;
  int edge_runs = 0;
  for (int s = 0; s < seeds; ++s) {
    RunParams params = run_params_from(config, config.seeds.front() * 104729 + s, 128);
    const TwoSidedRun run = run_two_sided(params);
    // Use the level with the richest edge set on this sample.
    std::map<int, std::vector<double>> by_level;
    for (const auto& e : run.graph.edges)
      by_level[e.level].push_back(run.field.spec.time_at(e.cell));
    std::vector<double>* times = nullptr;
    for (auto& [level, xs] : by_level)
      if (!times || xs.size() > times->size()) times = &xs;
    if (!times || times->size() < 8) continue;
    const double span = run.field.spec.time_at(run.col_hi) - run.field.spec.time_at(run.col_lo);
    const BoxCountFit fit = boxcount_dimension(*times, 4 * params.delta, span / 8.0);
    edge_mean += fit.slope;
    ++edge_runs;
  }
  if (edge_runs) edge_mean /= edge_runs;

  result.seconds = seconds_since(start);
  const bool calib_ok = std::abs(calib_mean - 0.5) <= 0.1;
  const bool edge_ok = edge_runs > 0 && std::abs(edge_mean - 0.5) <= 0.15;
  result.passed = calib_ok && edge_ok && result.seconds < 120.0;
  result.detail = "calibration_slope=" + format(calib_mean) + " edge_slope=" + format(edge_mean) +
                  " runs=" + std::to_string(edge_runs) + " time=" + format(result.seconds) + "s";
  return result;
}

// ---------------------------------------------------------------------------
// 11. Nesting across a direction lattice.

CheckResult check_nesting(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"nesting",
                     "graphs nest as the direction interval widens; shocks common to the extreme "
                     "surrogates persist at intermediate directions",
                     true};
  const auto start = Clock::now();
  const int seeds = first_seeds(config, 2);
  const int horizon = config.smoke ? 80 : 150;
  const std::vector<double> gammas = {0.7, 0.8, 0.9};
  const std::vector<double> deltas = {1.1, 1.2, 1.3};
  long edge_violations = 0, interval_violations = 0, shock_violations = 0, shock_pairs = 0;
  for (int s = 0; s < seeds; ++s) {
    const double top_dir = deltas.back() * (1.0 + config.eta_factor);
    const FieldSpec spec =
        window_spec(horizon, top_dir * horizon, config.field.delta, config.seeds[s]);
    const BrownianField field = generate_field(spec);

    std::vector<ReverseProfile> w_low, w_high;
    for (double g : gammas)
      w_low.push_back(
          reverse_profile(field, make_target(spec, horizon, g * (1.0 - config.eta_factor))));
    for (double d : deltas)
      w_high.push_back(
          reverse_profile(field, make_target(spec, horizon, d * (1.0 + config.eta_factor))));

    const int level_hi = std::max(2, horizon / 4);
    const int col_lo = spec.zero_index();
    const int col_hi = spec.index_of(0.7 * w_low.front().target.theta_eff * horizon);

    std::vector<std::vector<InstabilityGraph>> graphs(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i)
      for (std::size_t j = 0; j < deltas.size(); ++j)
        graphs[i].push_back(
            assemble_graph(w_low[i], w_high[j], config.tol, 0, level_hi, col_lo, col_hi));

    // gamma decreasing / delta increasing widens the interval: containment.
    for (std::size_t i = 0; i < gammas.size(); ++i)
      for (std::size_t j = 0; j < deltas.size(); ++j)
        for (std::size_t i2 = i; i2 < gammas.size(); ++i2)
          for (std::size_t j2 = j; j2 < deltas.size(); ++j2) {
            if (i2 == i && j2 == j) continue;
            // inner [gamma_i2 >= gamma? careful: larger gamma index = larger gamma.
            const NestingViolations v =
                graph_nesting_check(graphs[i2][j], graphs[i][j2], 0);
            edge_violations += v.edge_violations;
            interval_violations += v.interval_violations;
          }

    // Shock nesting between the extreme surrogates and the midpoint direction.
    const ArgmaxMaps maps_lo = argmax_maps(field, w_low.front(), -1);
    const ArgmaxMaps maps_hi = argmax_maps(field, w_high.back(), +1);
    const double eps = default_shock_eps(spec, config.eps_factor);
    const ShockSet set_lo =
        shock_set(detect_branches(maps_lo, 1, level_hi, col_lo, col_hi), maps_lo, eps);
    const ShockSet set_hi =
        shock_set(detect_branches(maps_hi, 1, level_hi, col_lo, col_hi), maps_hi, eps);
    const ClassifiedShocks classes = classify(set_lo, set_hi, config.match_radius);

    for (double mid : {1.0 * (1.0 - config.eta_factor), 1.0 * (1.0 + config.eta_factor)}) {
      const ReverseProfile w_mid = reverse_profile(field, make_target(spec, horizon, mid));
      const ArgmaxMaps maps_mid = argmax_maps(field, w_mid, 0);
      const ShockSet set_mid =
          shock_set(detect_branches(maps_mid, 1, level_hi, col_lo, col_hi), maps_mid, eps);
      for (const auto& s2 : classes.both_a) {
        ++shock_pairs;
        bool found = false;
        for (const auto& m : set_mid.shocks)
          if (m.level == s2.level && std::abs(m.index - s2.index) <= config.match_radius)
            found = true;
        shock_violations += !found;
      }
    }
  }
  result.seconds = seconds_since(start);
  result.passed = edge_violations == 0 && interval_violations == 0 && shock_violations == 0;
  std::ostringstream detail;
  detail << "edge_v=" << edge_violations << " interval_v=" << interval_violations
         << " shock_v=" << shock_violations << "/" << shock_pairs;
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 12. Directedness of traced geodesics and interface direction ordering.

CheckResult check_directedness(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"directedness",
                     "traced geodesics have slope near the target direction; interface "
                     "direction estimates are ordered",
                     true};
  const auto start = Clock::now();
  const int trace_to = config.smoke ? 60 : 200;
  const int horizon = trace_to + trace_to / 3;
  long total = 0, good = 0;
  for (double theta : {0.6, 1.0}) {
    const FieldSpec spec =
        window_spec(horizon, theta * horizon * (1.0 + config.eta_factor) + 5.0,
                    config.field.delta, config.seeds.front(), 15.0);
    const BrownianField field = generate_field(spec);
    const ReverseProfile w = reverse_profile(field, make_target(spec, horizon, theta));
    const ArgmaxMaps maps = argmax_maps(field, w, 0);
    std::mt19937_64 rng(config.seeds.front() ^ std::uint64_t(theta * 4096));
    const int i_lo = spec.index_of(-10.0), i_hi = spec.index_of(10.0);
    for (int t = 0; t < (config.smoke ? 60 : 250); ++t) {
      const GridPoint origin{static_cast<int>(rng() % 6),
                             i_lo + static_cast<int>(rng() % static_cast<unsigned>(i_hi - i_lo))};
      for (Side side : {Side::Left, Side::Right}) {
        const SemiGeodesic geo = busemann_geodesic(maps, origin, side, trace_to);
        if (geo.path.degenerate) continue;
        ++total;
        good += std::abs(direction_estimate(geo, spec) - w.target.theta_eff) <= 0.1;
      }
    }
  }
  const double frac = total ? double(good) / double(total) : 0.0;

  // Interface directions: the right estimate never exceeds the left beyond
  // the resolution slack.
  const int cif_levels = config.smoke ? 60 : 200;
  const FieldSpec spec =
      window_spec(cif_levels + 10, 1.0 * (cif_levels + 10) + 20.0, config.field.delta,
                  config.seeds.front());
  const BrownianField field = generate_field(spec);
  std::mt19937_64 rng(config.seeds.front() * 13 + 5);
  bool ordered = true;
  double max_gap = 0.0;
  for (int t = 0; t < (config.smoke ? 10 : 40); ++t) {
    const GridPoint root{static_cast<int>(rng() % 8),
                         spec.zero_index() + static_cast<int>(rng() % spec.index_of(30.0))};
    const DirectionEstimate est = estimate_directions(field, root, cif_levels);
    if (est.degenerate) continue;
    max_gap = std::max(max_gap, est.theta_right - est.theta_left);
    ordered = ordered && est.theta_right <= est.theta_left + 0.05;
  }
  result.seconds = seconds_since(start);
  result.passed = frac >= 0.95 && ordered;
  result.detail = "direction_ok=" + format(frac) + " (n=" + std::to_string(total) + ")" +
                  " cif_ordered=" + (ordered ? "yes" : "no") + " max_gap=" + format(max_gap);
  return result;
}

// ---------------------------------------------------------------------------
// 13. Horizon-doubling stabilization diagnostic (reported, not gating).

CheckResult check_stabilization(const RunConfig& config, const VerifyOptions&) {
  CheckResult result{"busemann.stabilization",
                     "horizon doubling moves probe estimates by less than 1e-3", false};
  const auto start = Clock::now();
  const int k1 = config.smoke ? 60 : 200;
  const int k2 = 2 * k1;
  const FieldSpec spec =
      window_spec(k2, 1.0 * k2 * 1.02, config.field.delta, config.seeds.front());
  const BrownianField field = generate_field(spec);
  std::mt19937_64 rng(config.seeds.front() + 77);
  std::vector<ProbePair> probes;
  const int i_lo = spec.index_of(10.0);
  const int i_hi = spec.index_of(0.6 * k1);
  const int sep = spec.index_of(spec.t_min + 2.5);
  for (int t = 0; t < (config.smoke ? 40 : 150); ++t) {
    const int m = static_cast<int>(rng() % (k1 / 5));
    const int i = i_lo + static_cast<int>(rng() % static_cast<unsigned>(i_hi - i_lo));
    const int j = i + 1 + static_cast<int>(rng() % static_cast<unsigned>(sep));
    const int m2 = m + static_cast<int>(rng() % 3);
    probes.push_back({{m, i}, {m2, std::min(j, i_hi)}});
  }
  const StabilizationReport report = stabilization_report(field, 1.0, probes, {k1, k2});
  long stable = 0;
  for (double d : report.probe_drift) stable += d < 1e-3;
  const double frac = probes.empty() ? 1.0 : double(stable) / double(probes.size());
  result.seconds = seconds_since(start);
  result.passed = frac >= 0.9;
  result.detail = "stable_fraction=" + format(frac) + " max_drift=" + format(report.max_drift) +
                  " horizons=" + std::to_string(k1) + "->" + std::to_string(k2);
  return result;
}

using CheckFn = CheckResult (*)(const RunConfig&, const VerifyOptions&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"dp.oracle", check_dp_oracle},
      {"busemann.cocycle", check_cocycle},
      {"busemann.monotonicity", check_monotonicity},
      {"geodesic.no-double-vertical", check_no_double_vertical},
      {"geodesic.ordering", check_geodesic_ordering},
      {"shocks.tree-laws", check_shock_tree},
      {"shocks.graph-correspondence", check_shock_graph_correspondence},
      {"instability.analytic-vs-geometric", check_analytic_vs_geometric},
      {"reconstruct.skeleton", check_reconstruction},
      {"dimension.boxcount", check_boxcount},
      {"nesting", check_nesting},
      {"directedness", check_directedness},
      {"busemann.stabilization", check_stabilization},
  };
  return checks;
}

}  // namespace

std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

CheckResult run_check(const std::string& id, const RunConfig& config,
                      const VerifyOptions& options) {
  for (const auto& [name, fn] : registry())
    if (name == id) return fn(config, options);
  throw std::invalid_argument("run_check: unknown check '" + id + "'");
}

std::vector<CheckResult> run_all_checks(const RunConfig& config, const VerifyOptions& options) {
  std::vector<CheckResult> results;
  for (const auto& [id, fn] : registry()) results.push_back(fn(config, options));
  return results;
}

void print_report(const std::vector<CheckResult>& results) {
  int index = 0;
  for (const auto& r : results) {
    ++index;
    const char* status = r.passed ? (r.hard ? "PASS" : "PASS") : (r.hard ? "FAIL" : "REPORT");
    std::printf("[%s] C%-2d %-36s %s (%.2fs)\n", status, index, r.id.c_str(), r.detail.c_str(),
                r.seconds);
  }
}

void write_report_json(const std::vector<CheckResult>& results, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results)
    j.push_back({{"id", r.id},
                 {"label", r.label},
                 {"hard", r.hard},
                 {"passed", r.passed},
                 {"detail", r.detail},
                 {"seconds", r.seconds}});
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_report_json: cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

int report_exit_code(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (r.hard && !r.passed) return 1;
  return 0;
}

}  // namespace blpp
