#include <doctest.h>

#include "blpp/pipeline.hpp"
#include "blpp/reconstruct.hpp"

using namespace blpp;

TEST_CASE("mechanical application of the three reconstruction steps") {
  // only-high shock at (0, index 10); only-low shocks at (1, 30) and (0, 20).
  const std::vector<BranchPoint> only_high = {{0, 10, 12, 0.0}};
  const std::vector<BranchPoint> only_low = {{1, 30, 33, 0.0}, {0, 20, 22, 0.0}};
  const Skeleton skel = reconstruct_skeleton(only_high, only_low, 100);
  REQUIRE(skel.intervals.size() == 1);
  CHECK(skel.intervals[0].dual_level == 0);
  CHECK(skel.intervals[0].left == 10);
  CHECK(skel.intervals[0].right == 30);
  CHECK_FALSE(skel.intervals[0].open);
  REQUIRE(skel.edges.size() == 1);
  CHECK(skel.edges[0].level == 0);
  CHECK(skel.edges[0].index == 20);
}

TEST_CASE("empty inputs give an empty skeleton") {
  const Skeleton skel = reconstruct_skeleton({}, {}, 100);
  CHECK(skel.intervals.empty());
  CHECK(skel.edges.empty());
}

TEST_CASE("marks without closers are flagged open") {
  const std::vector<BranchPoint> only_high = {{0, 10, 12, 0.0}};
  const Skeleton skel = reconstruct_skeleton(only_high, {}, 100);
  REQUIRE(skel.intervals.size() == 1);
  CHECK(skel.intervals[0].open);
}

TEST_CASE("the next mark acts as a sentinel for closers") {
  const std::vector<BranchPoint> only_high = {{0, 10, 12, 0.0}, {0, 50, 52, 0.0}};
  const std::vector<BranchPoint> only_low = {{1, 30, 33, 0.0}, {1, 60, 62, 0.0}};
  const Skeleton skel = reconstruct_skeleton(only_high, only_low, 100);
  REQUIRE(skel.intervals.size() == 2);
  CHECK(skel.intervals[0].right == 30);  // 60 lies beyond the next mark
  CHECK(skel.intervals[1].right == 60);
  CHECK(skel.edges.empty());
}

TEST_CASE("scoring against a matching and a shifted graph") {
  // Edges 9..11 mimic the accumulation left of an interior shock edge: only
  // the right-isolated ones (11 and 20) are recoverable and scored.
  InstabilityGraph graph;
  graph.level_lo = 0;
  graph.level_hi = 2;
  graph.intervals = {{0, 10, 30, true, true}};
  graph.edges = {{0, 9, 1.0}, {0, 10, 1.0}, {0, 11, 1.0}, {0, 20, 1.0}};
  graph.interval_down_edges = {{0, 1, 2, 3}};
  graph.interval_up_edges = {{}};

  Skeleton skel;
  skel.intervals = {{0, 10, 30, false}};
  skel.edges = {{0, 11}, {0, 20}};
  SUBCASE("perfect skeleton scores full recall") {
    const SkeletonScore score = compare_graphs(skel, graph, 2, 1);
    CHECK(score.interval_recall() == doctest::Approx(1.0));
    CHECK(score.edge_recall() == doctest::Approx(1.0));
    CHECK(score.hausdorff_bulk_excluded);
  }
  SUBCASE("a shifted skeleton is counted as a mismatch") {
    skel.intervals[0].left = 16;
    const SkeletonScore score = compare_graphs(skel, graph, 2, 1);
    CHECK(score.interval_recall() == doctest::Approx(0.0));
  }
  SUBCASE("empty skeleton against an empty graph is perfect") {
    const SkeletonScore score = compare_graphs(Skeleton{}, InstabilityGraph{}, 2, 1);
    CHECK(score.interval_recall() == doctest::Approx(1.0));
    CHECK(score.edge_recall() == doctest::Approx(1.0));
  }
}

TEST_CASE("seeded end-to-end reconstruction") {
  RunParams params;
  params.delta = 0.05;
  params.seed = 4;
  params.horizon = 120;
  const TwoSidedRun run = run_two_sided(params);
  const Skeleton skel =
      reconstruct_skeleton(run.classes.only_b, run.classes.only_a, run.col_hi + 1);
  // Reconstructed interval count = marks minus nothing; open ones flagged.
  CHECK(skel.intervals.size() == run.classes.only_b.size());
  // Every reconstructed vertical edge coincides exactly with a low-side time.
  for (const auto& e : skel.edges) {
    bool found = false;
    for (const auto& s : run.classes.only_a)
      found = found || (s.level == e.level && s.index == e.index);
    CHECK(found);
  }
  const SkeletonScore score = compare_graphs(skel, run.graph, 2, 1);
  CHECK(score.graph_intervals >= 0);  // smoke: the score is computable
}
