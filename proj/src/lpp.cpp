#include "blpp/lpp.hpp"

#include <cstdio>

namespace blpp {

namespace {

void check_origin(const FieldSpec& spec, GridPoint p, const char* who) {
  if (!spec.has_level(p.level) || !spec.has_index(p.index))
    throw std::invalid_argument(std::string(who) + ": point outside field window");
}

void check_ordered(GridPoint x, GridPoint y, const char* who) {
  if (y.level < x.level || y.index < x.index)
    throw std::invalid_argument(std::string(who) + ": endpoints not ordered");
}

}  // namespace

ForwardProfile forward_profile(const BrownianField& field, GridPoint origin, int top_level) {
  const FieldSpec& spec = field.spec;
  check_origin(spec, origin, "forward_profile");
  if (top_level < origin.level || top_level > spec.level_max)
    throw std::invalid_argument("forward_profile: top level outside window");

  const int nodes = spec.nodes();
  const int a = origin.index;
  ForwardProfile prof;
  prof.origin = origin;
  prof.top_level = top_level;
  prof.v.resize(top_level - origin.level + 1, nodes);
  prof.v.leftCols(a).setConstant(kNegInf);

  const auto b0 = field.row(origin.level);
  const double base = b0(a);
  for (int i = a; i < nodes; ++i) prof.v(0, i) = b0(i) - base;

  for (int k = origin.level + 1; k <= top_level; ++k) {
    const auto bk = field.row(k);
    const auto prev = prof.v.row(k - 1 - origin.level);
    auto cur = prof.v.row(k - origin.level);
    double running = kNegInf;
    for (int i = a; i < nodes; ++i) {
      const double candidate = prev(i) - bk(i);
      if (candidate > running) running = candidate;
      cur(i) = bk(i) + running;
    }
  }
  return prof;
}

double last_passage_time(const BrownianField& field, GridPoint x, GridPoint y) {
  check_origin(field.spec, x, "last_passage_time");
  check_origin(field.spec, y, "last_passage_time");
  check_ordered(x, y, "last_passage_time");
  if (x.index == y.index) return 0.0;  // pure vertical path, weight 0 by convention
  if (x.level == y.level) return field.at(x.level, y.index) - field.at(x.level, x.index);
  return forward_profile(field, x, y.level).at(y.level, y.index);
}

UpRightPath point_geodesic(const BrownianField& field, GridPoint x, GridPoint y, Side side) {
  check_origin(field.spec, x, "point_geodesic");
  check_origin(field.spec, y, "point_geodesic");
  check_ordered(x, y, "point_geodesic");

  UpRightPath path;
  path.start_level = x.level;
  path.jumps.assign(static_cast<std::size_t>(y.level - x.level) + 2, x.index);
  path.jumps.back() = y.index;
  if (x.index == y.index) {
    path.degenerate = x.level < y.level;
    return path;
  }
  if (x.level == y.level) return path;  // jumps = {x.index, y.index}

  const ForwardProfile prof = forward_profile(field, x, y.level - 1);
  int upper = y.index;
  for (int k = y.level; k > x.level; --k) {
    const auto bk = field.row(k);
    const auto prev = prof.row(k - 1);
    // Exact-equality ties: leftmost keeps the first maximum, rightmost the last.
    int arg = x.index;
    double best = prev(x.index) - bk(x.index);
    for (int r = x.index + 1; r <= upper; ++r) {
      const double value = prev(r) - bk(r);
      if (value > best || (side == Side::Right && value == best)) {
        best = value;
        arg = r;
      }
    }
    path.jumps[k - x.level] = arg;
    upper = arg;
  }
  // Repeated jump times (two consecutive vertical steps) occur with positive
  // probability on a fixed grid although they vanish under refinement; such
  // paths are flagged rather than rejected, like the pure-vertical case.
  path.degenerate = path.has_double_vertical();
  return path;
}

double path_weight(const BrownianField& field, const UpRightPath& path) {
  double w = 0.0;
  for (int k = path.start_level; k <= path.end_level(); ++k)
    w += field.at(k, path.exit_index(k)) - field.at(k, path.entry_index(k));
  return w;
}

LevelMatrix initial_condition_profile(const BrownianField& field, int level, const ValueRow& phi,
                                      int top_level) {
  const FieldSpec& spec = field.spec;
  if (!spec.has_level(level) || top_level < level || top_level > spec.level_max)
    throw std::invalid_argument("initial_condition_profile: level range outside window");
  if (phi.size() != spec.nodes())
    throw std::invalid_argument("initial_condition_profile: phi length mismatch");

  const int nodes = spec.nodes();
  LevelMatrix u(top_level - level + 1, nodes);

  const auto b0 = field.row(level);
  double running = kNegInf;
  for (int i = 0; i < nodes; ++i) {
    const double candidate = phi(i) - b0(i);
    if (candidate > running) running = candidate;
    u(0, i) = b0(i) + running;
  }
  for (int k = level + 1; k <= top_level; ++k) {
    const auto bk = field.row(k);
    const auto prev = u.row(k - 1 - level);
    auto cur = u.row(k - level);
    running = kNegInf;
    for (int i = 0; i < nodes; ++i) {
      const double candidate = prev(i) - bk(i);
      if (candidate > running) running = candidate;
      cur(i) = bk(i) + running;
    }
  }
  return u;
}

double solve_initial_condition(const BrownianField& field, int level, const ValueRow& phi, int n,
                               int target_index) {
  if (!field.spec.has_index(target_index))
    throw std::invalid_argument("solve_initial_condition: target outside window");
  const LevelMatrix u = initial_condition_profile(field, level, phi, n);
  return u(n - level, target_index);
}

void export_profile_csv(const ForwardProfile& profile, const FieldSpec& spec,
                        const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_profile_csv: cannot open " + path);
  std::fprintf(f, "level,time,value\n");
  for (int k = profile.origin.level; k <= profile.top_level; ++k)
    for (int i = 0; i < spec.nodes(); ++i) {
      const double v = profile.at(k, i);
      if (v != kNegInf) std::fprintf(f, "%d,%.17g,%.17g\n", k, spec.time_at(i), v);
    }
  std::fclose(f);
}

void export_path_csv(const UpRightPath& path, const FieldSpec& spec, const std::string& file) {
  std::FILE* f = std::fopen(file.c_str(), "w");
  if (!f) throw std::runtime_error("export_path_csv: cannot open " + file);
  std::fprintf(f, "level,jump_time\n");
  for (std::size_t j = 0; j < path.jumps.size(); ++j)
    std::fprintf(f, "%d,%.17g\n", path.start_level + static_cast<int>(j) - 1,
                 spec.time_at(path.jumps[j]));
  std::fclose(f);
}

}  // namespace blpp
