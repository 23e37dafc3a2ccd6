#include "blpp/shocks.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "blpp/svg.hpp"

namespace blpp {

std::vector<BranchPoint> detect_branches(const ArgmaxMaps& maps, int level_lo, int level_hi,
                                         int col_lo, int col_hi) {
  if (col_hi < 0) col_hi = maps.target.target_index;
  level_lo = std::max(level_lo, maps.base_level);
  level_hi = std::min(level_hi, maps.target.horizon_level - 1);
  std::vector<BranchPoint> branches;
  for (int n = level_lo; n <= level_hi; ++n) {
    for (int i = std::max(0, col_lo); i < col_hi; ++i) {
      if (maps.tauL(n, i) != i) continue;
      const int arm = maps.tauL(n, i + 1);
      if (arm <= i + 1) continue;
      branches.push_back({n, i, arm, maps.g_at(n, i) - maps.g_at(n, arm)});
    }
  }
  return branches;
}

ShockSet shock_set(const std::vector<BranchPoint>& branches, const ArgmaxMaps& maps, double eps) {
  ShockSet set;
  set.target = maps.target;
  set.eta_sign = maps.eta_sign;
  set.eps = eps;
  for (const auto& b : branches)
    if (b.gap <= eps) set.shocks.push_back(b);
  std::sort(set.shocks.begin(), set.shocks.end(), [](const BranchPoint& a, const BranchPoint& b) {
    return a.level != b.level ? a.level < b.level : a.index < b.index;
  });
  return set;
}

double default_shock_eps(const FieldSpec& spec, double eps_factor) {
  return eps_factor * std::sqrt(spec.delta);
}

bool is_ancestor(const BranchPoint& x, const GridPoint& y, const ArgmaxMaps& maps,
                 bool strict_right) {
  if (y.level < x.level || y.level >= maps.target.horizon_level) return false;
  if (y.level == x.level)
    return x.index <= y.index && (strict_right ? y.index < x.arm_index : y.index <= x.arm_index);
  // Walk both arms up to y's level: the up-arm ascends at x.index and then
  // follows tauL; the right-arm starts from the relocated maximizer.
  int up = x.index;         // up-arm jump time at the current level
  int right = x.arm_index;  // right-arm jump time at the current level
  int entry = x.index;      // up-arm entry into the current level
  for (int n = x.level + 1; n <= y.level; ++n) {
    entry = up;
    up = maps.tauL(n, up);
    right = maps.tauL(n, right);
  }
  return entry <= y.index && (strict_right ? y.index < right : y.index <= right);
}

ChildResult child(const BranchPoint& x, const ArgmaxMaps& maps) {
  ChildResult result;
  const int m = x.level - 1;
  if (m < maps.base_level) {
    result.truncated = true;
    return result;
  }
  // Nodes to the left of x whose geodesics still reach x's lateral shadow
  // have tauL above themselves; the infimum construction lands on the
  // nearest node below x that ascends, i.e. the largest fixed point of the
  // lower map. When the node below x itself ascends (a grid double-vertical
  // configuration) the shock column continues straight down.
  result.degenerate = maps.tauL(m, x.index) == x.index;
  int j = x.index;
  while (j >= 0 && maps.tauL(m, j) != j) --j;
  if (j < 0) {
    result.truncated = true;
    return result;
  }
  const int arm = maps.tauL(m, std::min(j + 1, maps.target.target_index));
  result.child = BranchPoint{m, j, arm, maps.g_at(m, j) - maps.g_at(m, arm)};
  return result;
}

ShockTree build_tree(const ShockSet& set, const ArgmaxMaps& maps) {
  ShockTree tree;
  tree.set = set;
  const std::size_t n = set.shocks.size();
  tree.child_of.assign(n, -1);
  tree.child_truncated.assign(n, 0);
  tree.child_raw.assign(n, BranchPoint{});
  for (std::size_t k = 0; k < n; ++k) {
    const ChildResult res = child(set.shocks[k], maps);
    if (!res.child) {
      tree.child_truncated[k] = 1;
      continue;
    }
    tree.child_raw[k] = *res.child;
    const auto it = std::lower_bound(
        set.shocks.begin(), set.shocks.end(), *res.child,
        [](const BranchPoint& a, const BranchPoint& b) {
          return a.level != b.level ? a.level < b.level : a.index < b.index;
        });
    if (it != set.shocks.end() && it->level == res.child->level &&
        it->index == res.child->index)
      tree.child_of[k] = static_cast<int>(it - set.shocks.begin());
  }
  return tree;
}

// A shock present at both surrogate directions is the same geometric tie
// seen through two reverse profiles that differ only by a local constant, so
// position, arm and gap all agree; points whose maps genuinely differ keep
// order-one gap mismatches. The gap test is what separates a stable shock
// from a distinct neighbor inside the matching radius.
ClassifiedShocks classify(const ShockSet& set_a, const ShockSet& set_b, int match_radius) {
  ClassifiedShocks out;
  std::vector<char> b_used(set_b.shocks.size(), 0);
  for (const auto& a : set_a.shocks) {
    int best = -1;
    int best_dist = match_radius + 1;
    for (std::size_t j = 0; j < set_b.shocks.size(); ++j) {
      const auto& b = set_b.shocks[j];
      if (b.level != a.level || b_used[j]) continue;
      const int dist = std::abs(b.index - a.index);
      if (dist > match_radius || std::abs(b.arm_index - a.arm_index) > match_radius) continue;
      if (std::abs(b.gap - a.gap) > 1e-9 * (1.0 + std::abs(a.gap))) continue;
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(j);
      }
    }
    if (best >= 0) {
      b_used[best] = 1;
      out.both_a.push_back(a);
      out.both_b.push_back(set_b.shocks[best]);
    } else {
      out.only_a.push_back(a);
    }
  }
  for (std::size_t j = 0; j < set_b.shocks.size(); ++j)
    if (!b_used[j]) out.only_b.push_back(set_b.shocks[j]);
  return out;
}

void export_shocks_json(const ShockSet& set, const FieldSpec& spec, const std::string& path,
                        const std::string& side_label) {
  nlohmann::json j;
  j["side"] = side_label;
  j["eps"] = set.eps;
  j["direction"] = set.target.theta_eff;
  auto& items = j["shocks"];
  items = nlohmann::json::array();
  for (const auto& s : set.shocks)
    items.push_back({{"level", s.level},
                     {"time", spec.time_at(s.index)},
                     {"gap", s.gap},
                     {"side", side_label}});
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_shocks_json: cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

void export_shock_tree_svg(const ShockTree& tree, const ClassifiedShocks* classes,
                           const FieldSpec& spec, int match_radius, const std::string& path) {
  SvgCanvas canvas(spec);
  auto color_of = [&](const BranchPoint& s) -> std::string {
    if (!classes) return "#888888";
    for (const auto& a : classes->only_a)
      if (a.level == s.level && std::abs(a.index - s.index) <= match_radius) return "#cc0000";
    for (const auto& b : classes->only_b)
      if (b.level == s.level && std::abs(b.index - s.index) <= match_radius) return "#204a87";
    return "#2e8b57";
  };
  for (std::size_t k = 0; k < tree.set.shocks.size(); ++k) {
    const auto& s = tree.set.shocks[k];
    if (tree.child_of[k] >= 0) {
      const auto& c = tree.set.shocks[tree.child_of[k]];
      canvas.add_segment(s.level, spec.time_at(s.index), c.level, spec.time_at(c.index),
                         "#bbbbbb", 0.6);
    }
    canvas.add_dot(s.level, spec.time_at(s.index), color_of(s), 2.0);
  }
  canvas.write(path);
}

}  // namespace blpp
