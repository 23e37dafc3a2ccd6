#include <doctest.h>

#include <cmath>
#include <random>

#include "blpp/geodesics.hpp"

using namespace blpp;

namespace {

FieldSpec grid(int levels, int lo_nodes, int hi_nodes, double delta, std::uint64_t seed) {
  FieldSpec spec;
  spec.level_min = 0;
  spec.level_max = levels - 1;
  spec.delta = delta;
  spec.t_min = -lo_nodes * delta;
  spec.t_max = hi_nodes * delta;
  spec.seed = seed;
  return spec;
}

std::pair<Eigen::ArrayXi, Eigen::ArrayXi> scan(const std::vector<double>& g) {
  ValueRow row(static_cast<int>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) row(static_cast<int>(i)) = g[i];
  Eigen::ArrayXi tl(row.size()), tr(row.size());
  scan_argmax(row, tl, tr);
  return {tl, tr};
}

}  // namespace

TEST_CASE("argmax scans") {
  SUBCASE("strictly decreasing: stay put") {
    const auto [tl, tr] = scan({5, 4, 3, 2, 1});
    for (int i = 0; i < 5; ++i) {
      CHECK(tl(i) == i);
      CHECK(tr(i) == i);
    }
  }
  SUBCASE("strictly increasing: jump to the end") {
    const auto [tl, tr] = scan({1, 2, 3, 4, 5});
    for (int i = 0; i < 5; ++i) {
      CHECK(tl(i) == 4);
      CHECK(tr(i) == 4);
    }
  }
  SUBCASE("constructed tie") {
    const auto [tl, tr] = scan({0, 5, 3, 5, 1});
    CHECK(std::vector<int>(tl.data(), tl.data() + 5) == std::vector<int>{1, 1, 3, 3, 4});
    CHECK(std::vector<int>(tr.data(), tr.data() + 5) == std::vector<int>{3, 3, 3, 3, 4});
  }
}

TEST_CASE("degenerate objectives are flagged, not rejected") {
  const FieldSpec spec = grid(30, 4, 60, 0.25, 1);
  const BrownianField zero =
      inject_field(spec, LevelMatrix::Zero(spec.levels(), spec.nodes()));
  Target target;
  target.horizon_level = 29;
  target.target_index = spec.nodes() - 1;
  target.theta_eff = spec.t_max / 29.0;
  const ReverseProfile w = reverse_profile(zero, target);
  const ArgmaxMaps maps = argmax_maps(zero, w, 0);
  const GridPoint origin{0, spec.zero_index()};
  const SemiGeodesic left = busemann_geodesic(maps, origin, Side::Left);
  CHECK(left.path.degenerate);  // all ties: the leftmost run is vertical
  const SemiGeodesic right = busemann_geodesic(maps, origin, Side::Right);
  CHECK(right.path.jumps[1] == target.target_index);  // rightmost runs to the cone edge
}

TEST_CASE("traced geodesics are optimal to the target") {
  const FieldSpec spec = grid(40, 10, 240, 0.2, 23);
  const BrownianField field = generate_field(spec);
  const ReverseProfile w = reverse_profile(field, make_target(spec, 39, 1.0));
  const ArgmaxMaps maps = argmax_maps(field, w, 0);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const GridPoint origin{static_cast<int>(rng() % 10),
                           static_cast<int>(rng() % (w.target.target_index / 2))};
    const SemiGeodesic geo = busemann_geodesic(maps, origin, Side::Left, 38);
    // Collected weight plus the remaining reverse value returns W at the origin.
    double weight = 0.0;
    for (int k = origin.level; k <= geo.path.end_level(); ++k)
      weight += field.at(k, geo.path.exit_index(k)) - field.at(k, geo.path.entry_index(k));
    const int end_level = geo.path.end_level();
    const int end_index = geo.path.exit_index(end_level);
    const double total = weight + w.at(end_level + 1, end_index);
    CHECK(std::abs(total - w.at(origin.level, origin.index)) <= 1e-9);
  }
}

TEST_CASE("ordering of traced geodesics") {
  const FieldSpec spec = grid(60, 10, 400, 0.2, 29);
  const BrownianField field = generate_field(spec);
  const ReverseProfile w_lo = reverse_profile(field, make_target(spec, 59, 0.95));
  const ReverseProfile w_hi = reverse_profile(field, make_target(spec, 59, 1.05));
  const ArgmaxMaps lo = argmax_maps(field, w_lo, -1);
  const ArgmaxMaps hi = argmax_maps(field, w_hi, +1);
  std::mt19937_64 rng(11);
  const int stop = 44;
  auto leq = [](const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
      if (a[k] > b[k]) return false;
    return true;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const int level = static_cast<int>(rng() % 20);
    const int i = static_cast<int>(rng() % 150);
    const int j = i + 1 + static_cast<int>(rng() % 50);
    CHECK(leq(trace_jump_indices(lo, {level, i}, Side::Right, stop),
              trace_jump_indices(lo, {level, j}, Side::Left, stop)));
    CHECK(leq(trace_jump_indices(lo, {level, i}, Side::Left, stop),
              trace_jump_indices(lo, {level, i}, Side::Right, stop)));
    CHECK(leq(trace_jump_indices(lo, {level, i}, Side::Left, stop),
              trace_jump_indices(hi, {level, i}, Side::Left, stop)));
  }
}

TEST_CASE("split at the origin or not at all") {
  const FieldSpec spec = grid(60, 10, 400, 0.2, 37);
  const BrownianField field = generate_field(spec);
  const ReverseProfile w = reverse_profile(field, make_target(spec, 59, 1.0));
  const ArgmaxMaps maps = argmax_maps(field, w, 0);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const GridPoint origin{static_cast<int>(rng() % 20), static_cast<int>(rng() % 150)};
    const auto left = trace_jump_indices(maps, origin, Side::Left, 44);
    const auto right = trace_jump_indices(maps, origin, Side::Right, 44);
    if (left != right) CHECK(left[1] != right[1]);
  }
}

TEST_CASE("coalescence of traced geodesics") {
  const FieldSpec spec = grid(80, 10, 500, 0.2, 41);
  const BrownianField field = generate_field(spec);
  const ReverseProfile w = reverse_profile(field, make_target(spec, 79, 1.0));
  const ArgmaxMaps maps = argmax_maps(field, w, 0);
  const GridPoint a{0, 40};
  const SemiGeodesic ga = busemann_geodesic(maps, a, Side::Left, 59);
  const auto same = coalescence_point(ga, ga);
  REQUIRE(same.has_value());
  CHECK(*same == a);

  int met = 0, total = 0;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const GridPoint x{0, static_cast<int>(rng() % 120)};
    const GridPoint y{0, static_cast<int>(rng() % 120)};
    const auto gx = busemann_geodesic(maps, x, Side::Left, 59);
    const auto gy = busemann_geodesic(maps, y, Side::Left, 59);
    ++total;
    met += coalescence_point(gx, gy).has_value();
  }
  CHECK(met >= total * 95 / 100);

  const ReverseProfile w2 = reverse_profile(field, make_target(spec, 79, 1.2));
  const ArgmaxMaps maps2 = argmax_maps(field, w2, 0);
  const SemiGeodesic other = busemann_geodesic(maps2, a, Side::Left, 59);
  CHECK_THROWS_AS(coalescence_point(ga, other), std::invalid_argument);
}

TEST_CASE("direction estimates") {
  const FieldSpec spec = grid(30, 4, 60, 0.25, 1);
  SemiGeodesic geo;
  geo.path.start_level = 0;
  geo.path.jumps = {spec.zero_index(), spec.zero_index() + 2, spec.zero_index() + 4,
                    spec.zero_index() + 6};
  CHECK(std::abs(direction_estimate(geo, spec) - spec.time_at(spec.zero_index() + 6) / 2) <=
        1e-12);
  geo.path.degenerate = true;
  CHECK(direction_estimate(geo, spec) == 0.0);
}

TEST_CASE("left-continuity proxy: equal first jumps imply equal traces") {
  const FieldSpec spec = grid(50, 10, 300, 0.2, 53);
  const BrownianField field = generate_field(spec);
  const ReverseProfile w = reverse_profile(field, make_target(spec, 49, 1.0));
  const ArgmaxMaps maps = argmax_maps(field, w, 0);
  for (int i = 1; i < 100; ++i) {
    const auto a = trace_jump_indices(maps, {0, i - 1}, Side::Left, 36);
    const auto b = trace_jump_indices(maps, {0, i}, Side::Left, 36);
    if (a[1] == b[1])
      CHECK(std::vector<int>(a.begin() + 1, a.end()) == std::vector<int>(b.begin() + 1, b.end()));
  }
}
