#include "blpp/busemann.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace blpp {

Target make_target(const FieldSpec& spec, int horizon_level, double theta) {
  if (theta <= 0.0) throw std::invalid_argument("make_target: theta must be > 0");
  if (!spec.has_level(horizon_level))
    throw std::invalid_argument("make_target: horizon level outside window");
  const double t = theta * horizon_level;
  const int index = spec.index_of(t);
  if (!spec.has_index(index))
    throw std::invalid_argument("make_target: target time outside window");
  Target target;
  target.horizon_level = horizon_level;
  target.theta = theta;
  target.target_index = index;
  target.theta_eff = spec.time_at(index) / horizon_level;
  return target;
}

ReverseProfile reverse_profile(const BrownianField& field, const Target& target) {
  const FieldSpec& spec = field.spec;
  if (!spec.has_level(target.horizon_level) || !spec.has_index(target.target_index))
    throw std::invalid_argument("reverse_profile: target outside window");

  const int b = target.target_index;
  ReverseProfile prof;
  prof.target = target;
  prof.base_level = spec.level_min;
  prof.w.resize(target.horizon_level - spec.level_min + 1, spec.nodes());
  if (b + 1 < spec.nodes()) prof.w.rightCols(spec.nodes() - b - 1).setConstant(kNegInf);

  const auto bK = field.row(target.horizon_level);
  const double top = bK(b);
  auto last = prof.w.row(target.horizon_level - spec.level_min);
  for (int i = 0; i <= b; ++i) last(i) = top - bK(i);

  for (int m = target.horizon_level - 1; m >= spec.level_min; --m) {
    const auto bm = field.row(m);
    const auto above = prof.w.row(m + 1 - spec.level_min);
    auto cur = prof.w.row(m - spec.level_min);
    double running = kNegInf;
    for (int i = b; i >= 0; --i) {
      const double candidate = bm(i) + above(i);
      if (candidate > running) running = candidate;
      cur(i) = running - bm(i);
    }
  }
  return prof;
}

BusemannEstimate busemann_estimate(const ReverseProfile& w, GridPoint x, GridPoint y) {
  if (!w.feasible(x) || !w.feasible(y))
    throw std::invalid_argument("busemann_estimate: probe outside the feasible cone");
  return BusemannEstimate{w.at(x.level, x.index) - w.at(y.level, y.index), w.target, x, y};
}

ValueRow horizontal_profile(const ReverseProfile& w, int level) {
  const int b = w.target.target_index;
  ValueRow d(b + 1);
  const double ref = w.at(level, 0);
  for (int i = 0; i <= b; ++i) d(i) = ref - w.at(level, i);
  return d;
}

double vertical_increment(const ReverseProfile& w, int level, int index) {
  if (level + 1 > w.target.horizon_level)
    throw std::invalid_argument("vertical_increment: level above horizon");
  return w.at(level, index) - w.at(level + 1, index);
}

StabilizationReport stabilization_report(const BrownianField& field, double theta,
                                         const std::vector<ProbePair>& probes,
                                         const std::vector<int>& horizons) {
  StabilizationReport report;
  report.theta = theta;
  report.horizons = horizons;
  report.probes = probes;
  report.values.assign(probes.size(), std::vector<double>(horizons.size(), 0.0));
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const ReverseProfile w = reverse_profile(field, make_target(field.spec, horizons[h], theta));
    for (std::size_t p = 0; p < probes.size(); ++p)
      report.values[p][h] = busemann_estimate(w, probes[p].x, probes[p].y).value;
  }
  report.probe_drift.resize(probes.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    double drift = 0.0;
    for (std::size_t h = 0; h + 1 < horizons.size(); ++h)
      drift = std::max(drift, std::abs(report.values[p][h] - report.values[p].back()));
    report.probe_drift[p] = drift;
    report.max_drift = std::max(report.max_drift, drift);
  }
  return report;
}

void export_reverse_profile_csv(const ReverseProfile& w, const FieldSpec& spec,
                                const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_reverse_profile_csv: cannot open " + path);
  std::fprintf(f, "level,time,value\n");
  for (int m = w.base_level; m <= w.target.horizon_level; ++m)
    for (int i = 0; i <= w.target.target_index; ++i)
      std::fprintf(f, "%d,%.17g,%.17g\n", m, spec.time_at(i), w.at(m, i));
  std::fclose(f);
}

void export_stabilization_json(const StabilizationReport& report, const FieldSpec& spec,
                               const std::string& path) {
  nlohmann::json j;
  j["theta"] = report.theta;
  j["eta"] = report.eta;
  j["horizons"] = report.horizons;
  j["drift"] = report.max_drift;
  auto& probes = j["probes"];
  for (std::size_t p = 0; p < report.probes.size(); ++p) {
    nlohmann::json entry;
    entry["x"] = {report.probes[p].x.level, spec.time_at(report.probes[p].x.index)};
    entry["y"] = {report.probes[p].y.level, spec.time_at(report.probes[p].y.index)};
    entry["values"] = report.values[p];
    entry["drift"] = report.probe_drift[p];
    probes.push_back(entry);
  }
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_stabilization_json: cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

ProbeWindow probe_window(const FieldSpec& spec, int horizon_level, double time_frac,
                         double level_frac) {
  ProbeWindow win;
  const int nodes = spec.nodes();
  const double lo_frac = 0.5 - time_frac / 2.0, hi_frac = 0.5 + time_frac / 2.0;
  win.col_lo = std::max(1, static_cast<int>(nodes * lo_frac));
  win.col_hi = std::min(nodes - 2, static_cast<int>(nodes * hi_frac));
  win.level_lo = spec.level_min;
  win.level_hi = spec.level_min +
                 std::max(1, static_cast<int>((horizon_level - spec.level_min) * level_frac));
  return win;
}

}  // namespace blpp
