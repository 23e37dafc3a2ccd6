#include "blpp/cif.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace blpp {

namespace {

bool values_equal(double a, double b, double tol) {
  return a == b || std::abs(a - b) <= tol;
}

}  // namespace

CompetitionInterface trace_cif(const BrownianField& field, GridPoint root, Side side, int levels,
                               double tol) {
  const FieldSpec& spec = field.spec;
  if (!spec.has_level(root.level) || !spec.has_level(root.level + 1) || !spec.has_index(root.index))
    throw std::invalid_argument("trace_cif: root outside window");
  const int top = root.level + levels;
  if (top > spec.level_max) throw std::invalid_argument("trace_cif: window too short for trace");

  const ForwardProfile f0 = forward_profile(field, root, top);
  const ForwardProfile f1 = forward_profile(field, {root.level + 1, root.index}, top);

  CompetitionInterface cif;
  cif.root = root;
  cif.side = side;
  cif.sigma.reserve(static_cast<std::size_t>(levels) + 1);
  cif.sigma.push_back(root.index);
  const int nodes = spec.nodes();
  for (int n = root.level + 1; n <= top; ++n) {
    const auto r0 = f0.row(n);
    const auto r1 = f1.row(n);
    int s;
    if (side == Side::Right) {
      s = root.index;
      for (int i = nodes - 1; i >= root.index; --i) {
        if (values_equal(r0(i), r1(i), tol)) {
          s = i;
          break;
        }
      }
    } else {
      s = nodes - 1;
      for (int i = root.index; i < nodes; ++i) {
        if (!values_equal(r0(i), r1(i), tol)) {
          s = i - 1;
          break;
        }
      }
      s = std::max(s, root.index);
    }
    cif.sigma.push_back(s);
  }
  cif.degenerate = cif.sigma.back() >= nodes - 1;
  return cif;
}

double direction_from(const CompetitionInterface& cif, const FieldSpec& spec) {
  const int levels = static_cast<int>(cif.sigma.size()) - 1;
  if (levels <= 0) return 0.0;
  return (spec.time_at(cif.sigma.back()) - spec.time_at(cif.root.index)) / levels;
}

DirectionEstimate estimate_directions(const BrownianField& field, GridPoint root, int levels) {
  const CompetitionInterface right = trace_cif(field, root, Side::Right, levels);
  const CompetitionInterface left = trace_cif(field, root, Side::Left, levels);
  DirectionEstimate est;
  est.root = root;
  est.theta_right = direction_from(right, field.spec);
  est.theta_left = direction_from(left, field.spec);
  est.degenerate = right.degenerate || left.degenerate;
  return est;
}

CifConsistencyReport cif_shock_consistency(const BrownianField& field, const ShockSet& shocks,
                                           const std::vector<GridPoint>& controls,
                                           double direction, double band, int levels,
                                           std::size_t max_shocks) {
  CifConsistencyReport report;
  std::size_t step = std::max<std::size_t>(1, shocks.shocks.size() / std::max<std::size_t>(1, max_shocks));
  for (std::size_t k = 0; k < shocks.shocks.size(); k += step) {
    const auto& s = shocks.shocks[k];
    if (s.level + levels > field.spec.level_max) continue;
    const DirectionEstimate est = estimate_directions(field, {s.level, s.index}, levels);
    report.shocks_checked++;
    if (direction >= est.theta_right - band && direction <= est.theta_left + band)
      report.shocks_inside_band++;
  }
  for (const auto& p : controls) {
    if (p.level + levels > field.spec.level_max) continue;
    const DirectionEstimate est = estimate_directions(field, p, levels);
    report.controls_checked++;
    if (direction < est.theta_right - band || direction > est.theta_left + band)
      report.controls_outside_band++;
  }
  return report;
}

CifEdgeReport cif_edge_correspondence(const BrownianField& field, const InstabilityGraph& graph,
                                      const ArgmaxMaps& maps_gamma, const ArgmaxMaps& maps_delta,
                                      const ClassifiedShocks& classes,
                                      const std::vector<GridPoint>& samples, double band,
                                      int levels) {
  CifEdgeReport report;
  for (const auto& p : samples) {
    if (p.level + levels > field.spec.level_max) continue;
    const bool edge = graph.has_edge(p.level, p.index) ||
                      (p.index > 0 && graph.has_edge(p.level, p.index - 1));
    const DirectionEstimate est = estimate_directions(field, p, levels);
    const bool band_hit = graph.gamma_eff <= est.theta_left + band &&
                          graph.delta_eff >= est.theta_right - band;
    report.edge_vs_band.samples++;
    report.edge_vs_band.agreements += edge == band_hit;
    report.edge_vs_band.positives_analytic += edge;
    report.edge_vs_band.positives_geometric += band_hit;
  }

  // Split trichotomy through the surrogate geodesic maps: compare first
  // jumps of the L and R geodesics at the two directions.
  auto splits = [&](const BranchPoint& s, Side side) {
    const int jg = side == Side::Left ? maps_gamma.tauL(s.level, s.index)
                                      : maps_gamma.tauR(s.level, s.index);
    const int jd = side == Side::Left ? maps_delta.tauL(s.level, s.index)
                                      : maps_delta.tauR(s.level, s.index);
    return jg != jd;
  };
  for (const auto& s : classes.only_b) {  // below left endpoints of intervals
    report.left_endpoints_checked++;
    if (splits(s, Side::Right) && !splits(s, Side::Left)) report.left_endpoints_r_split_only++;
  }
  for (const auto& s : classes.only_a) {  // interior low-direction shocks
    report.interior_minus_checked++;
    if (splits(s, Side::Left) && !splits(s, Side::Right)) report.interior_minus_l_split_only++;
  }
  for (const auto& e : graph.edges) {
    // Edge cells carrying no detected shock at either surrogate direction.
    bool shocked = false;
    for (const auto& s : classes.only_a)
      if (s.level == e.level && std::abs(s.index - e.cell) <= 1) shocked = true;
    for (const auto& s : classes.only_b)
      if (s.level == e.level && std::abs(s.index - e.cell) <= 1) shocked = true;
    for (const auto& s : classes.both_a)
      if (s.level == e.level && std::abs(s.index - e.cell) <= 1) shocked = true;
    if (shocked) continue;
    if (report.no_shock_edges_checked >= 64) break;
    report.no_shock_edges_checked++;
    const BranchPoint probe{e.level, e.cell, e.cell, 0.0};
    if (!splits(probe, Side::Left) && !splits(probe, Side::Right))
      report.no_shock_edges_symmetric++;
  }
  return report;
}

void export_cif_csv(const CompetitionInterface& cif, const FieldSpec& spec,
                    const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_cif_csv: cannot open " + path);
  std::fprintf(f, "dual_level,jump_time\n");
  for (std::size_t j = 0; j < cif.sigma.size(); ++j)
    std::fprintf(f, "%.1f,%.17g\n", cif.root.level + static_cast<double>(j) + 0.5,
                 spec.time_at(cif.sigma[j]));
  std::fclose(f);
}

void export_directions_json(const std::vector<DirectionEstimate>& estimates,
                            const FieldSpec& spec, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : estimates)
    j.push_back({{"level", e.root.level},
                 {"time", spec.time_at(e.root.index)},
                 {"theta_left", e.theta_left},
                 {"theta_right", e.theta_right},
                 {"degenerate", e.degenerate}});
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_directions_json: cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

}  // namespace blpp
