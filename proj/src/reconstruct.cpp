#include "blpp/reconstruct.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "blpp/svg.hpp"

namespace blpp {

Skeleton reconstruct_skeleton(const std::vector<BranchPoint>& only_high,
                              const std::vector<BranchPoint>& only_low, int grid_nodes) {
  Skeleton skel;

  std::map<int, std::vector<int>> marks;  // dual level -> sorted mark indices
  for (const auto& s : only_high) marks[s.level].push_back(s.index);
  for (auto& [level, xs] : marks) std::sort(xs.begin(), xs.end());

  std::map<int, std::vector<int>> low_by_level;
  for (const auto& s : only_low) low_by_level[s.level].push_back(s.index);
  for (auto& [level, xs] : low_by_level) std::sort(xs.begin(), xs.end());

  std::set<std::pair<int, int>> used;
  for (const auto& [dual, xs] : marks) {
    const auto closers_it = low_by_level.find(dual + 1);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const int left = xs[k];
      const int sentinel = k + 1 < xs.size() ? xs[k + 1] : grid_nodes;
      int right = -1;
      if (closers_it != low_by_level.end()) {
        for (int t : closers_it->second)
          if (t > left && t < sentinel) right = std::max(right, t);
      }
      SkeletonInterval interval{dual, left, right, right < 0};
      if (right >= 0) used.insert({dual + 1, right});
      skel.intervals.push_back(interval);
    }
  }

  for (const auto& s : only_low)
    if (!used.count({s.level, s.index})) skel.edges.push_back({s.level, s.index});
  std::sort(skel.edges.begin(), skel.edges.end(), [](const SkeletonEdge& a, const SkeletonEdge& b) {
    return a.level != b.level ? a.level < b.level : a.index < b.index;
  });
  return skel;
}

SkeletonScore compare_graphs(const Skeleton& skeleton, const InstabilityGraph& graph,
                             int node_tol, int iso_gap) {
  SkeletonScore score;
  score.skeleton_intervals = static_cast<long>(skeleton.intervals.size());

  auto matches = [&](const InstabilityInterval& g, const SkeletonInterval& s) {
    return g.dual_level == s.dual_level && !s.open && std::abs(g.left - s.left) <= node_tol &&
           std::abs(g.right - s.right) <= node_tol;
  };
  std::vector<char> skel_hit(skeleton.intervals.size(), 0);
  for (const auto& g : graph.intervals) {
    score.graph_intervals++;
    for (std::size_t k = 0; k < skeleton.intervals.size(); ++k) {
      if (matches(g, skeleton.intervals[k])) {
        score.matched_intervals++;
        skel_hit[k] = 1;
        break;
      }
    }
  }
  for (char h : skel_hit) score.skeleton_intervals_matched += h;

  // Only right-isolated edges carry low-direction shocks, so only they are
  // in scope for recall; the remaining edges form the unrecoverable bulk.
  for (const auto& e : graph.edges) {
    bool isolated = true;
    for (int c = e.cell + 1; c <= e.cell + iso_gap && isolated; ++c)
      isolated = !graph.has_edge(e.level, c);
    if (!isolated) continue;
    score.right_isolated_edges++;
    for (const auto& se : skeleton.edges) {
      if (se.level == e.level && std::abs(se.index - e.cell) <= node_tol) {
        score.recalled_edges++;
        break;
      }
    }
  }
  return score;
}

void export_skeleton_json(const Skeleton& skeleton, const FieldSpec& spec,
                          const std::string& path) {
  nlohmann::json j;
  j["intervals"] = nlohmann::json::array();
  for (const auto& iv : skeleton.intervals)
    j["intervals"].push_back({{"dual_level", iv.dual_level + 0.5},
                              {"left", spec.time_at(iv.left)},
                              {"right", iv.open ? nlohmann::json() : nlohmann::json(spec.time_at(iv.right))},
                              {"open", iv.open}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : skeleton.edges)
    j["edges"].push_back({{"level", e.level}, {"time", spec.time_at(e.index)}});
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_skeleton_json: cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

void export_overlay_svg(const Skeleton& skeleton, const InstabilityGraph& graph,
                        const FieldSpec& spec, const std::string& path) {
  SvgCanvas canvas(spec);
  for (const auto& iv : graph.intervals)
    canvas.add_segment(iv.dual_level + 0.5, spec.time_at(iv.left), iv.dual_level + 0.5,
                       spec.time_at(iv.right), "#cc0000", 2.0);
  for (const auto& e : graph.edges)
    canvas.add_segment(e.level - 0.5, spec.time_at(e.cell), e.level + 0.5, spec.time_at(e.cell),
                       "#cc0000", 1.0);
  for (const auto& iv : skeleton.intervals) {
    const double right = iv.open ? spec.t_max : spec.time_at(iv.right);
    canvas.add_segment(iv.dual_level + 0.65, spec.time_at(iv.left), iv.dual_level + 0.65, right,
                       "#204a87", 1.2);
  }
  for (const auto& e : skeleton.edges)
    canvas.add_segment(e.level - 0.35, spec.time_at(e.index), e.level + 0.35,
                       spec.time_at(e.index), "#204a87", 0.8);
  canvas.write(path);
}

}  // namespace blpp
