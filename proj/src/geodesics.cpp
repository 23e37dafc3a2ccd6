#include "blpp/geodesics.hpp"

#include <algorithm>

#include "blpp/svg.hpp"

namespace blpp {

void scan_argmax(const Eigen::Ref<const ValueRow>& g, Eigen::Ref<Eigen::ArrayXi> tau_left,
                 Eigen::Ref<Eigen::ArrayXi> tau_right) {
  const int n = static_cast<int>(g.size());
  if (n == 0) return;
  tau_left(n - 1) = n - 1;
  tau_right(n - 1) = n - 1;
  for (int i = n - 2; i >= 0; --i) {
    tau_left(i) = g(i) >= g(tau_left(i + 1)) ? i : tau_left(i + 1);
    tau_right(i) = g(i) > g(tau_right(i + 1)) ? i : tau_right(i + 1);
  }
}

ArgmaxMaps argmax_maps(const BrownianField& field, const ReverseProfile& w, int eta_sign) {
  const FieldSpec& spec = field.spec;
  const int b = w.target.target_index;
  const int rows = w.target.horizon_level - spec.level_min;
  if (rows <= 0) throw std::invalid_argument("argmax_maps: horizon at or below the window base");

  ArgmaxMaps maps;
  maps.target = w.target;
  maps.eta_sign = eta_sign;
  maps.base_level = spec.level_min;
  maps.g.resize(rows, b + 1);
  maps.tau_left.resize(rows, b + 1);
  maps.tau_right.resize(rows, b + 1);

  Eigen::ArrayXi tl(b + 1), tr(b + 1);
  ValueRow row(b + 1);
  for (int n = spec.level_min; n < w.target.horizon_level; ++n) {
    const auto bn = field.row(n);
    for (int i = 0; i <= b; ++i) row(i) = bn(i) + w.at(n + 1, i);
    maps.g.row(n - spec.level_min) = row;
    scan_argmax(row, tl, tr);
    maps.tau_left.row(n - spec.level_min) = tl;
    maps.tau_right.row(n - spec.level_min) = tr;
  }
  return maps;
}

int default_truncation_level(const Target& target, int base_level) {
  const int span = target.horizon_level - base_level;
  return target.horizon_level - std::max(1, span / 4);
}

std::vector<int> trace_jump_indices(const ArgmaxMaps& maps, GridPoint origin, Side side,
                                    int stop_level) {
  std::vector<int> jumps;
  jumps.reserve(static_cast<std::size_t>(stop_level - origin.level) + 2);
  jumps.push_back(origin.index);
  int i = origin.index;
  for (int n = origin.level; n <= stop_level; ++n) {
    i = side == Side::Left ? maps.tauL(n, i) : maps.tauR(n, i);
    jumps.push_back(i);
  }
  return jumps;
}

SemiGeodesic busemann_geodesic(const ArgmaxMaps& maps, GridPoint origin, Side side,
                               int stop_level) {
  if (stop_level < 0) stop_level = default_truncation_level(maps.target, maps.base_level);
  if (origin.level < maps.base_level || origin.level >= maps.target.horizon_level ||
      origin.index < 0 || origin.index > maps.target.target_index)
    throw std::invalid_argument("busemann_geodesic: origin outside the feasible cone");
  stop_level = std::min(stop_level, maps.target.horizon_level - 1);

  SemiGeodesic geo;
  geo.origin = origin;
  geo.side = side;
  geo.target = maps.target;
  geo.eta_sign = maps.eta_sign;
  geo.path.start_level = origin.level;
  geo.path.jumps = trace_jump_indices(maps, origin, side, stop_level);
  geo.path.degenerate = geo.path.has_double_vertical();
  return geo;
}

std::optional<GridPoint> coalescence_point(const SemiGeodesic& a, const SemiGeodesic& b) {
  if (!(a.target == b.target) || a.eta_sign != b.eta_sign)
    throw std::invalid_argument("coalescence_point: geodesics target different directions");
  if (a.origin == b.origin && a.path.jumps == b.path.jumps)
    return GridPoint{a.origin.level, a.origin.index};

  const int lo = std::max(a.path.start_level, b.path.start_level);
  const int hi = std::min(a.path.end_level(), b.path.end_level());
  if (hi < lo) return std::nullopt;
  if (a.path.exit_index(hi) != b.path.exit_index(hi)) return std::nullopt;
  int level = hi;
  while (level > lo && a.path.exit_index(level - 1) == b.path.exit_index(level - 1)) --level;
  return GridPoint{level, a.path.exit_index(level)};
}

double direction_estimate(const SemiGeodesic& geo, const FieldSpec& spec) {
  if (geo.path.degenerate) return 0.0;
  const int end = geo.path.end_level();
  if (end <= 0) return 0.0;
  return spec.time_at(geo.path.exit_index(end)) / end;
}

void export_geodesic_fan_svg(const std::vector<SemiGeodesic>& fan, const FieldSpec& spec,
                             const std::string& path) {
  SvgCanvas canvas(spec);
  for (const auto& geo : fan) canvas.add_path(geo.path, "#3465a4", 0.8);
  if (!fan.empty()) {
    const auto& t = fan.front().target;
    canvas.add_dot(t.horizon_level, spec.time_at(t.target_index), "#cc0000", 3.0);
  }
  canvas.write(path);
}

}  // namespace blpp
