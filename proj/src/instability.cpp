#include "blpp/instability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "blpp/svg.hpp"

namespace blpp {

namespace {

bool edge_less(const InstabilityEdge& a, const InstabilityEdge& b) {
  return a.level != b.level ? a.level < b.level : a.cell < b.cell;
}

void check_pair(const ReverseProfile& wg, const ReverseProfile& wd) {
  if (!(wg.target.horizon_level == wd.target.horizon_level) || wg.base_level != wd.base_level)
    throw std::invalid_argument("instability: profiles have mismatched horizons");
  if (wg.w.cols() != wd.w.cols())
    throw std::invalid_argument("instability: profiles built on different grids");
}

}  // namespace

bool InstabilityGraph::has_edge(int level, int cell) const {
  InstabilityEdge probe{level, cell, 0.0};
  const auto it = std::lower_bound(edges.begin(), edges.end(), probe, edge_less);
  return it != edges.end() && it->level == level && it->cell == cell;
}

const InstabilityInterval* InstabilityGraph::interval_at(int dual_level, int node) const {
  for (const auto& iv : intervals) {
    if (iv.dual_level != dual_level) continue;
    if (node >= iv.left && node <= iv.right) return &iv;
  }
  return nullptr;
}

bool InstabilityGraph::on_graph(int dual_level, int node) const {
  if (interval_at(dual_level, node)) return true;
  for (int cell : {node - 1, node}) {
    if (has_edge(dual_level, cell)) return true;      // edge below, top touches here
    if (has_edge(dual_level + 1, cell)) return true;  // edge above, bottom touches here
  }
  return false;
}

std::vector<InstabilityEdge> detect_edges(const ReverseProfile& wg, const ReverseProfile& wd,
                                          double tol, int level_lo, int level_hi, int col_lo,
                                          int col_hi, double* worst_decrease) {
  check_pair(wg, wd);
  const int b = std::min(wg.target.target_index, wd.target.target_index);
  col_hi = col_hi < 0 ? b : std::min(col_hi, b);
  std::vector<InstabilityEdge> edges;
  double worst = 0.0;
  for (int m = level_lo; m <= level_hi; ++m) {
    for (int i = std::max(0, col_lo); i < col_hi; ++i) {
      const double d0 = wd.at(m, i) - wg.at(m, i);
      const double d1 = wd.at(m, i + 1) - wg.at(m, i + 1);
      const double inc = d1 - d0;
      if (inc > tol) edges.push_back({m, i, inc});
      if (inc < worst) worst = inc;
    }
  }
  if (worst_decrease) *worst_decrease = worst;
  return edges;
}

std::vector<std::vector<char>> detect_proper_points(const ReverseProfile& wg,
                                                    const ReverseProfile& wd, double tol,
                                                    int dual_lo, int dual_hi, int col_lo,
                                                    int col_hi) {
  check_pair(wg, wd);
  const int b = std::min(wg.target.target_index, wd.target.target_index);
  col_hi = col_hi < 0 ? b : std::min(col_hi, b);
  std::vector<std::vector<char>> proper;
  proper.reserve(static_cast<std::size_t>(dual_hi - dual_lo) + 1);
  for (int m = dual_lo; m <= dual_hi; ++m) {
    std::vector<char> row(static_cast<std::size_t>(col_hi) + 1, 0);
    for (int i = std::max(0, col_lo); i <= col_hi; ++i) {
      const double vg = wg.at(m, i) - wg.at(m + 1, i);
      const double vd = wd.at(m, i) - wd.at(m + 1, i);
      row[static_cast<std::size_t>(i)] = (vd - vg > tol) ? 1 : 0;
    }
    proper.push_back(std::move(row));
  }
  return proper;
}

InstabilityGraph assemble_graph(const ReverseProfile& wg, const ReverseProfile& wd, double tol,
                                int level_lo, int level_hi, int col_lo, int col_hi) {
  InstabilityGraph graph;
  graph.gamma_eff = wg.target.theta_eff;
  graph.delta_eff = wd.target.theta_eff;
  graph.tol = tol;
  graph.level_lo = level_lo;
  graph.level_hi = level_hi;
  graph.edges = detect_edges(wg, wd, tol, level_lo, level_hi, col_lo, col_hi);
  std::sort(graph.edges.begin(), graph.edges.end(), edge_less);

  // Intervals live on dual levels m + 1/2 for m in [level_lo, level_hi - 1]
  // so that both the down (m) and up (m+1) edge levels are inside the scan.
  const auto proper = detect_proper_points(wg, wd, tol, level_lo, level_hi - 1, col_lo, col_hi);
  for (int m = level_lo; m <= level_hi - 1; ++m) {
    const auto& row = proper[static_cast<std::size_t>(m - level_lo)];
    int i = 0;
    const int n = static_cast<int>(row.size());
    while (i < n) {
      if (!row[static_cast<std::size_t>(i)]) {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 < n && row[static_cast<std::size_t>(j + 1)]) ++j;
      graph.intervals.push_back({m, i, j, false, false});
      i = j + 1;
    }
  }

  graph.interval_down_edges.resize(graph.intervals.size());
  graph.interval_up_edges.resize(graph.intervals.size());
  for (std::size_t k = 0; k < graph.intervals.size(); ++k) {
    auto& iv = graph.intervals[k];
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const auto& edge = graph.edges[e];
      if (edge.cell < iv.left - 1 || edge.cell > iv.right) continue;
      if (edge.level == iv.dual_level) {
        graph.interval_down_edges[k].push_back(static_cast<int>(e));
        if (edge.cell <= iv.left) iv.left_edge_found = true;
      } else if (edge.level == iv.dual_level + 1) {
        graph.interval_up_edges[k].push_back(static_cast<int>(e));
        if (edge.cell >= iv.right - 1) iv.right_edge_found = true;
      }
    }
  }
  return graph;
}

AgreementReport geometric_edge_check(const InstabilityGraph& graph, const ArgmaxMaps& maps_gamma,
                                     const ArgmaxMaps& maps_delta,
                                     const std::vector<GridPoint>& samples, int stop_level) {
  AgreementReport report;
  for (const auto& p : samples) {
    const bool analytic = graph.has_edge(p.level, p.index) ||
                          (p.index > 0 && graph.has_edge(p.level, p.index - 1));
    const auto left = trace_jump_indices(maps_gamma, p, Side::Left, stop_level);
    const auto right = trace_jump_indices(maps_delta, p, Side::Right, stop_level);
    bool geometric = left[1] == p.index && right[1] > p.index;
    if (geometric) {
      // Disjoint after the origin: the right path's entry into each level
      // must stay strictly beyond the left path's exit.
      for (std::size_t k = 2; k < left.size(); ++k) {
        if (right[k - 1] <= left[k]) {
          geometric = false;
          break;
        }
      }
    }
    report.samples++;
    report.agreements += analytic == geometric;
    report.positives_analytic += analytic;
    report.positives_geometric += geometric;
  }
  return report;
}

AgreementReport geometric_point_check(const InstabilityGraph& graph, const ArgmaxMaps& maps_gamma,
                                      const ArgmaxMaps& maps_delta,
                                      const std::vector<GridPoint>& samples, int stop_level) {
  AgreementReport report;
  for (const auto& p : samples) {
    const bool analytic = graph.on_graph(p.level, p.index);
    const auto right = trace_jump_indices(maps_delta, p, Side::Right, stop_level);
    const auto left =
        trace_jump_indices(maps_gamma, {p.level + 1, p.index}, Side::Left, stop_level);
    // right[j] = s_{p.level-1+j}, left[j] = s_{p.level+j}; the level-n
    // segment of a path runs from its jump at n-1 to its jump at n.
    bool disjoint = true;
    for (int n = p.level + 1; n <= stop_level; ++n) {
      const int r_entry = right[static_cast<std::size_t>(n - p.level)];
      const int r_exit = right[static_cast<std::size_t>(n - p.level + 1)];
      const int l_entry = left[static_cast<std::size_t>(n - p.level - 1)];
      const int l_exit = left[static_cast<std::size_t>(n - p.level)];
      if (std::max(r_entry, l_entry) <= std::min(r_exit, l_exit)) {
        disjoint = false;
        break;
      }
    }
    report.samples++;
    report.agreements += analytic == disjoint;
    report.positives_analytic += analytic;
    report.positives_geometric += disjoint;
  }
  return report;
}

EquivalenceReport instability_equivalence_check(const ReverseProfile& wg,
                                                const ReverseProfile& wd,
                                                const InstabilityGraph& graph,
                                                const std::vector<GridPoint>& dual_samples) {
  check_pair(wg, wd);
  const double tol = graph.tol;
  auto diff = [&](int level, int i) { return wd.at(level, i) - wg.at(level, i); };
  auto proper = [&](int level, int i) {
    const double vg = wg.at(level, i) - wg.at(level + 1, i);
    const double vd = wd.at(level, i) - wd.at(level + 1, i);
    return vd - vg > tol;
  };
  const int b = std::min(wg.target.target_index, wd.target.target_index);
  EquivalenceReport rep;
  for (const auto& p : dual_samples) {
    const int m = p.level, i = p.index;
    if (i < 1 || i + 1 > b || m + 1 > wg.target.horizon_level) continue;
    const bool member = graph.on_graph(m, i);
    const bool two_point = diff(m, i + 1) - diff(m + 1, i - 1) > tol;
    const bool up = (diff(m + 1, i + 1) - diff(m + 1, i - 1) > tol) || proper(m, i + 1);
    const bool down = (diff(m, i + 1) - diff(m, i - 1) > tol) || proper(m, i - 1);
    for (auto [report, flag] : {std::pair{&rep.two_point, two_point},
                                std::pair{&rep.horizontal_up, up},
                                std::pair{&rep.horizontal_down, down}}) {
      report->samples++;
      report->agreements += member == flag;
      report->positives_analytic += member;
      report->positives_geometric += flag;
    }
  }
  return rep;
}

namespace {

struct Reach {
  std::map<int, int> interval_entry;  // interval id -> extreme entry node reached
  std::set<int> edges;
  bool boundary = false;
};

// Up-right (ancestor) or down-left (descendant) reachability over the graph.
Reach reach_set(const InstabilityGraph& graph, DualPoint start, bool upward) {
  Reach reach;
  int max_dual = graph.level_hi - 1;

  std::vector<std::pair<int, int>> queue;  // (interval id, entry node)
  auto push_interval = [&](int id, int entry) {
    auto it = reach.interval_entry.find(id);
    const bool improves =
        it == reach.interval_entry.end() || (upward ? entry < it->second : entry > it->second);
    if (improves) {
      reach.interval_entry[id] = entry;
      queue.emplace_back(id, entry);
    }
  };
  auto land = [&](int dual_level, int node) {
    if (dual_level < graph.level_lo || dual_level > max_dual) {
      reach.boundary = true;
      return;
    }
    for (std::size_t k = 0; k < graph.intervals.size(); ++k) {
      const auto& iv = graph.intervals[k];
      if (iv.dual_level == dual_level && node >= iv.left - 1 && node <= iv.right + 1)
        push_interval(static_cast<int>(k), std::clamp(node, iv.left, iv.right));
    }
  };
  auto take_edge = [&](int edge_id) {
    if (reach.edges.count(edge_id)) return false;
    reach.edges.insert(edge_id);
    const auto& e = graph.edges[static_cast<std::size_t>(edge_id)];
    // Edge at primal level l spans dual levels l-1 .. l.
    const int dual_to = upward ? e.level : e.level - 1;
    land(dual_to, e.cell);
    land(dual_to, e.cell + 1);
    return true;
  };

  // Seed: the interval containing the start, plus any vertical edge touching
  // the start node in the travel direction.
  land(start.dual_level, start.node);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    const bool touches = edge.cell == start.node || edge.cell == start.node - 1;
    if (!touches) continue;
    if (upward && edge.level == start.dual_level + 1) take_edge(static_cast<int>(e));
    if (!upward && edge.level == start.dual_level) take_edge(static_cast<int>(e));
  }

  while (!queue.empty()) {
    auto [id, entry] = queue.back();
    queue.pop_back();
    const auto& iv = graph.intervals[static_cast<std::size_t>(id)];
    const auto& exits =
        upward ? graph.interval_up_edges[static_cast<std::size_t>(id)]
               : graph.interval_down_edges[static_cast<std::size_t>(id)];
    for (int edge_id : exits) {
      const auto& e = graph.edges[static_cast<std::size_t>(edge_id)];
      const bool usable = upward ? e.cell + 1 >= entry : e.cell <= entry;
      if (usable) take_edge(edge_id);
    }
    if (upward && iv.dual_level >= max_dual) reach.boundary = true;
    if (!upward && iv.dual_level <= graph.level_lo) reach.boundary = true;
  }
  return reach;
}

GraphSearchResult common_point(const InstabilityGraph& graph, DualPoint x, DualPoint y,
                               bool upward) {
  if (x.dual_level == y.dual_level && x.node == y.node) return {DualPoint{x.dual_level, x.node}, false};
  const Reach rx = reach_set(graph, x, upward);
  const Reach ry = reach_set(graph, y, upward);
  GraphSearchResult best;
  for (const auto& [id, ex] : rx.interval_entry) {
    const auto it = ry.interval_entry.find(id);
    if (it == ry.interval_entry.end()) continue;
    const auto& iv = graph.intervals[static_cast<std::size_t>(id)];
    const int node = upward ? std::max(ex, it->second) : std::min(ex, it->second);
    const DualPoint p{iv.dual_level, node};
    if (!best.point || (upward ? p.dual_level < best.point->dual_level
                               : p.dual_level > best.point->dual_level))
      best.point = p;
  }
  if (!best.point) {
    for (int e : rx.edges) {
      if (!ry.edges.count(e)) continue;
      const auto& edge = graph.edges[static_cast<std::size_t>(e)];
      best.point = DualPoint{upward ? edge.level : edge.level - 1, edge.cell};
      break;
    }
  }
  // No common element found: never guess, report the query as truncated.
  if (!best.point) best.truncated = true;
  return best;
}

}  // namespace

GraphSearchResult find_common_ancestor(const InstabilityGraph& graph, DualPoint x, DualPoint y) {
  return common_point(graph, x, y, true);
}

GraphSearchResult find_common_descendant(const InstabilityGraph& graph, DualPoint x,
                                         DualPoint y) {
  return common_point(graph, x, y, false);
}

NestingViolations graph_nesting_check(const InstabilityGraph& inner,
                                      const InstabilityGraph& outer, int node_radius) {
  NestingViolations v;
  for (const auto& e : inner.edges) {
    v.edges_checked++;
    bool found = false;
    for (int c = e.cell - node_radius; c <= e.cell + node_radius && !found; ++c)
      found = outer.has_edge(e.level, c);
    if (!found) v.edge_violations++;
  }
  for (const auto& iv : inner.intervals) {
    v.intervals_checked++;
    bool contained = false;
    for (const auto& ov : outer.intervals) {
      if (ov.dual_level != iv.dual_level) continue;
      if (ov.left <= iv.left + node_radius && ov.right >= iv.right - node_radius) {
        contained = true;
        break;
      }
    }
    if (!contained) v.interval_violations++;
  }
  return v;
}

BoxCountFit boxcount_dimension(std::vector<double> times, double r_min, double r_max) {
  BoxCountFit fit;
  if (times.size() < 2 || r_min <= 0.0 || r_max <= r_min) return fit;
  std::sort(times.begin(), times.end());
  const double t0 = times.front();

  std::vector<double> log_inv_r, log_n;
  for (double r = r_max; r >= r_min; r /= 2.0) {
    std::set<long long> boxes;
    for (double t : times) boxes.insert(static_cast<long long>(std::floor((t - t0) / r)));
    log_inv_r.push_back(std::log(1.0 / r));
    log_n.push_back(std::log(static_cast<double>(boxes.size())));
  }
  const int n = static_cast<int>(log_inv_r.size());
  if (n < 2) return fit;
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += log_inv_r[static_cast<std::size_t>(i)];
    my += log_n[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double dx = log_inv_r[static_cast<std::size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (log_n[static_cast<std::size_t>(i)] - my);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.scales = n;
  return fit;
}

void export_graph_json(const InstabilityGraph& graph, const FieldSpec& spec,
                       const std::string& path) {
  nlohmann::json j;
  j["gamma_eff"] = graph.gamma_eff;
  j["delta_eff"] = graph.delta_eff;
  j["tol"] = graph.tol;
  j["intervals"] = nlohmann::json::array();
  for (const auto& iv : graph.intervals)
    j["intervals"].push_back({{"dual_level", iv.dual_level + 0.5},
                              {"left", spec.time_at(iv.left)},
                              {"right", spec.time_at(iv.right)},
                              {"left_edge", iv.left_edge_found},
                              {"right_edge", iv.right_edge_found}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges)
    j["edges"].push_back(
        {{"level", e.level}, {"time", spec.time_at(e.cell)}, {"increase", e.increase}});
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_graph_json: cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

void export_graph_svg(const InstabilityGraph& graph, const FieldSpec& spec,
                      const std::string& path) {
  SvgCanvas canvas(spec);
  for (const auto& iv : graph.intervals)
    canvas.add_segment(iv.dual_level + 0.5, spec.time_at(iv.left), iv.dual_level + 0.5,
                       spec.time_at(iv.right), "#cc0000", 2.0);
  for (const auto& e : graph.edges)
    canvas.add_segment(e.level - 0.5, spec.time_at(e.cell), e.level + 0.5, spec.time_at(e.cell),
                       "#cc0000", 1.0);
  canvas.write(path);
}

}  // namespace blpp
