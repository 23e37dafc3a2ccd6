#include <doctest.h>

#include <random>

#include "blpp/instability.hpp"
#include "blpp/pipeline.hpp"

using namespace blpp;

namespace {

// Reverse profiles filled by hand for fixture tests.
ReverseProfile fixture_profile(const std::vector<std::vector<double>>& rows) {
  ReverseProfile w;
  w.base_level = 0;
  w.target.horizon_level = static_cast<int>(rows.size()) - 1;
  w.target.target_index = static_cast<int>(rows.front().size()) - 1;
  w.w.resize(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t m = 0; m < rows.size(); ++m)
    for (std::size_t i = 0; i < rows[m].size(); ++i)
      w.w(static_cast<int>(m), static_cast<int>(i)) = rows[m][i];
  return w;
}

}  // namespace

TEST_CASE("no edges between identical profiles") {
  const auto w = fixture_profile({{1, 2, 3, 4}, {0, 1, 2, 3}});
  CHECK(detect_edges(w, w, 1e-9, 0, 1, 0, -1).empty());
  const auto proper = detect_proper_points(w, w, 1e-9, 0, 0, 0, -1);
  for (char p : proper.front()) CHECK(p == 0);
}

TEST_CASE("a unit step in the difference gives exactly one edge") {
  const auto wg = fixture_profile({{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}});
  const auto wd = fixture_profile({{0, 0, 1, 1, 1}, {0, 0, 0, 0, 0}});
  const auto edges = detect_edges(wg, wd, 1e-9, 0, 0, 0, -1);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].level == 0);
  CHECK(edges[0].cell == 1);
  CHECK(edges[0].increase == doctest::Approx(1.0));
}

TEST_CASE("proper points come from vertical-increment gaps") {
  // w_delta puts weight on level 0 only, so its vertical increment exceeds
  // w_gamma's on nodes 1..2.
  const auto wg = fixture_profile({{0, 0, 0, 0}, {0, 0, 0, 0}});
  const auto wd = fixture_profile({{0, 1, 1, 0}, {0, 0, 0, 0}});
  const auto proper = detect_proper_points(wg, wd, 1e-9, 0, 0, 0, -1);
  CHECK(proper[0] == std::vector<char>{0, 1, 1, 0});
}

// Difference rows D_m = w_delta - w_gamma: a step at cell 1 on level 0 and a
// step at cell 4 on level 1 produce one interval per dual level with a down
// edge at the left endpoint and an up edge at the right endpoint.
const std::vector<std::vector<double>> kFixtureGamma = {
    {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}};
const std::vector<std::vector<double>> kFixtureDelta = {
    {0, 0, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 0, 0, 0}};

TEST_CASE("graph assembly on a one-interval fixture") {
  const auto wg = fixture_profile(kFixtureGamma);
  const auto wd = fixture_profile(kFixtureDelta);
  const InstabilityGraph graph = assemble_graph(wg, wd, 1e-9, 0, 2, 0, -1);
  REQUIRE(graph.edges.size() == 2);
  CHECK(graph.edges[0].level == 0);
  CHECK(graph.edges[0].cell == 1);
  CHECK(graph.edges[1].level == 1);
  CHECK(graph.edges[1].cell == 4);
  REQUIRE(graph.intervals.size() == 2);
  CHECK(graph.intervals[0].dual_level == 0);
  CHECK(graph.intervals[0].left == 2);
  CHECK(graph.intervals[0].right == 4);
  CHECK(graph.intervals[0].left_edge_found);
  CHECK(graph.intervals[0].right_edge_found);
  CHECK(graph.on_graph(0, 3));
  CHECK_FALSE(graph.on_graph(0, 0));

  SUBCASE("empty inputs give an empty graph") {
    const InstabilityGraph empty = assemble_graph(wg, wg, 1e-9, 0, 2, 0, -1);
    CHECK(empty.intervals.empty());
    CHECK(empty.edges.empty());
  }
}

TEST_CASE("difference profiles are nondecreasing on seeded fields") {
  RunParams params;
  params.delta = 0.1;
  params.seed = 5;
  params.horizon = 80;
  const TwoSidedRun run = run_two_sided(params);
  double worst = 0.0;
  detect_edges(run.w_low, run.w_high, params.tol, 0, run.probe_level_hi, run.col_lo, run.col_hi,
               &worst);
  CHECK(worst >= -1e-9);
}

TEST_CASE("graph search on the fixture graph") {
  const auto wg = fixture_profile(kFixtureGamma);
  const auto wd = fixture_profile(kFixtureDelta);
  const InstabilityGraph graph = assemble_graph(wg, wd, 1e-9, 0, 2, 0, -1);
  SUBCASE("a point is its own ancestor") {
    const auto res = find_common_ancestor(graph, {0, 3}, {0, 3});
    REQUIRE(res.point.has_value());
    CHECK(res.point->node == 3);
  }
  SUBCASE("two points on one interval meet inside it") {
    const auto res = find_common_ancestor(graph, {0, 2}, {0, 3});
    REQUIRE(res.point.has_value());
    CHECK(res.point->dual_level == 0);
    CHECK(res.point->node == 3);
  }
}

TEST_CASE("nesting is trivial for identical parameters") {
  RunParams params;
  params.delta = 0.1;
  params.seed = 9;
  params.horizon = 60;
  const TwoSidedRun run = run_two_sided(params);
  const NestingViolations v = graph_nesting_check(run.graph, run.graph, 0);
  CHECK(v.edge_violations == 0);
  CHECK(v.interval_violations == 0);
}

TEST_CASE("box count slopes on known sets") {
  SUBCASE("single point") {
    const BoxCountFit fit = boxcount_dimension({1.0, 1.0}, 0.01, 1.0);
    CHECK(std::abs(fit.slope) < 0.05);
  }
  SUBCASE("full interval") {
    std::vector<double> xs;
    for (int i = 0; i < 4096; ++i) xs.push_back(i / 4096.0 * 32.0);
    const BoxCountFit fit = boxcount_dimension(xs, 0.05, 4.0);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("Brownian zero set calibrates near one half") {
    double mean = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
      FieldSpec spec;
      spec.level_min = spec.level_max = 0;
      spec.delta = 1.0 / 64;
      spec.t_min = -spec.delta;
      spec.t_max = 64.0;
      spec.seed = 1000 + s;
      const BrownianField field = generate_field(spec);
      std::vector<double> zeros;
      const auto row = field.row(0);
      for (int i = spec.zero_index(); i + 1 < spec.nodes(); ++i)
        if ((row(i) > 0) != (row(i + 1) > 0)) zeros.push_back(spec.time_at(i));
      mean += boxcount_dimension(zeros, 4 * spec.delta, 8.0).slope / seeds;
    }
    CHECK(mean == doctest::Approx(0.5).epsilon(0.3));
  }
}

TEST_CASE("equivalence report agrees with membership on fixtures") {
  const auto wg = fixture_profile(kFixtureGamma);
  const auto wd = fixture_profile(kFixtureDelta);
  const InstabilityGraph graph = assemble_graph(wg, wd, 1e-9, 0, 2, 0, -1);
  std::vector<GridPoint> samples;
  for (int i = 1; i <= 5; ++i) samples.push_back({0, i});
  const EquivalenceReport rep = instability_equivalence_check(wg, wd, graph, samples);
  CHECK(rep.two_point.fraction() == doctest::Approx(1.0));
}
