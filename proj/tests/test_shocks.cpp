#include <doctest.h>

#include <map>
#include <random>

#include "blpp/pipeline.hpp"
#include "blpp/shocks.hpp"

using namespace blpp;

namespace {

// Hand-built maps for fixture tests: rows of tauL/tauR/g filled directly.
ArgmaxMaps fixture_maps(const std::vector<std::vector<double>>& g_rows) {
  ArgmaxMaps maps;
  const int rows = static_cast<int>(g_rows.size());
  const int cols = static_cast<int>(g_rows.front().size());
  maps.base_level = 0;
  maps.target.horizon_level = rows;
  maps.target.target_index = cols - 1;
  maps.g.resize(rows, cols);
  maps.tau_left.resize(rows, cols);
  maps.tau_right.resize(rows, cols);
  Eigen::ArrayXi tl(cols), tr(cols);
  ValueRow row(cols);
  for (int n = 0; n < rows; ++n) {
    for (int i = 0; i < cols; ++i) row(i) = g_rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
    maps.g.row(n) = row;
    scan_argmax(row, tl, tr);
    maps.tau_left.row(n) = tl;
    maps.tau_right.row(n) = tr;
  }
  return maps;
}

}  // namespace

TEST_CASE("branch detection on crafted rows") {
  SUBCASE("strictly decreasing objective has no branches") {
    const auto maps = fixture_maps({{5, 4, 3, 2, 1}});
    CHECK(detect_branches(maps, 0, 0).empty());
  }
  SUBCASE("exact tie gives a gap-zero branch") {
    const auto maps = fixture_maps({{0, 5, 3, 5, 1}});
    const auto branches = detect_branches(maps, 0, 0);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].index == 1);
    CHECK(branches[0].arm_index == 3);
    CHECK(branches[0].gap == 0.0);
  }
  SUBCASE("near tie keeps its gap") {
    const auto maps = fixture_maps({{0, 5, 3, 4, 1}});
    const auto branches = detect_branches(maps, 0, 0);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].index == 1);
    CHECK(branches[0].gap == doctest::Approx(1.0));
  }
}

TEST_CASE("shock sets filter by gap") {
  const auto maps = fixture_maps({{0, 5, 3, 4, 1}});
  const auto branches = detect_branches(maps, 0, 0);
  CHECK(shock_set(branches, maps, 0.0).shocks.empty());
  CHECK(shock_set(branches, maps, 2.0).shocks.size() == 1);
}

TEST_CASE("ancestry on crafted two-level maps") {
  // Level 0: branch at index 1 with arm at 3; level 1: flat-right objective
  // so both arms run to the right edge.
  const auto maps = fixture_maps({{0, 5, 3, 5, 1}, {0, 1, 2, 3, 4}});
  const auto branches = detect_branches(maps, 0, 0);
  REQUIRE(branches.size() == 1);
  const BranchPoint x = branches[0];
  CHECK(is_ancestor(x, {0, 1}, maps));        // reflexive
  CHECK(is_ancestor(x, {0, 2}, maps));        // between the arms on its own level
  CHECK_FALSE(is_ancestor(x, {0, 0}, maps));  // strictly left of the up-arm
  CHECK(is_ancestor(x, {1, 4}, maps));        // both arms land at the edge above
  CHECK_FALSE(is_ancestor(x, {1, 0}, maps));
}

TEST_CASE("child walks the lower argmax map leftward") {
  // Level 0 (below the shock): nodes 0..5 with a branch at 0 (tie 0 vs 4)
  // and the run tau = 4 for nodes 1..4.
  const auto maps = fixture_maps({{7, 5, 3, 4, 7, 1}, {0, 5, 3, 5, 1, 0}});
  const auto upper = detect_branches(maps, 1, 1);
  REQUIRE(upper.size() == 1);
  CHECK(upper[0].index == 1);
  const ChildResult res = child(upper[0], maps);
  REQUIRE(res.child.has_value());
  CHECK(res.child->level == 0);
  CHECK(res.child->index == 0);
  CHECK(res.child->gap == doctest::Approx(0.0));
}

TEST_CASE("classification splits matched and unmatched shocks") {
  ShockSet a, b;
  a.shocks = {{3, 10, 14, 0.1}, {3, 40, 44, 0.2}, {5, 7, 9, 0.0}};
  b.shocks = {{3, 11, 15, 0.1}, {4, 20, 22, 0.0}};
  SUBCASE("identical sets are all both") {
    const ClassifiedShocks classes = classify(a, a, 0);
    CHECK(classes.only_a.empty());
    CHECK(classes.only_b.empty());
    CHECK(classes.both_a.size() == 3);
  }
  SUBCASE("radius-2 matching") {
    const ClassifiedShocks classes = classify(a, b, 2);
    CHECK(classes.both_a.size() == 1);
    CHECK(classes.only_a.size() == 2);
    CHECK(classes.only_b.size() == 1);
  }
  SUBCASE("disjoint fixtures") {
    ShockSet c;
    c.shocks = {{9, 3, 5, 0.0}};
    const ClassifiedShocks classes = classify(a, c, 2);
    CHECK(classes.both_a.empty());
    CHECK(classes.only_a.size() == 3);
    CHECK(classes.only_b.size() == 1);
  }
}

TEST_CASE("tree assembly over a fixture") {
  SUBCASE("empty set gives an empty tree") {
    const auto maps = fixture_maps({{5, 4, 3, 2, 1}});
    const ShockTree tree = build_tree(shock_set({}, maps, 1.0), maps);
    CHECK(tree.set.shocks.empty());
    CHECK(tree.edge_count() == 0);
  }
  SUBCASE("two-level fixture links the child") {
    const auto maps = fixture_maps({{7, 5, 3, 4, 7, 1}, {0, 5, 3, 5, 1, 0}});
    std::vector<BranchPoint> branches;
    for (int n = 0; n < 2; ++n)
      for (const auto& b : detect_branches(maps, n, n)) branches.push_back(b);
    const ShockSet set = shock_set(branches, maps, 10.0);
    const ShockTree tree = build_tree(set, maps);
    REQUIRE(tree.set.shocks.size() >= 2);
    CHECK(tree.edge_count() >= 1);
  }
}

TEST_CASE("seeded run: tree laws hold on detected shocks") {
  RunParams params;
  params.delta = 0.1;
  params.seed = 12;
  params.horizon = 96;
  const TwoSidedRun run = run_two_sided(params);
  const ShockSet& set = run.shocks_low;
  const ArgmaxMaps& maps = run.maps_low;
  // Unique monotone child per level.
  std::map<int, std::vector<const BranchPoint*>> by_level;
  for (const auto& s : set.shocks) by_level[s.level].push_back(&s);
  for (const auto& [level, shocks] : by_level) {
    int last = -1;
    for (const auto* s : shocks) {
      const ChildResult res = child(*s, maps);
      if (!res.child) continue;
      CHECK(res.child->index >= last);
      last = res.child->index;
      // Rescanning from the child's own position is stable.
      const ChildResult again = child(*s, maps);
      CHECK(again.child->index == res.child->index);
    }
  }
  // Ancestry is transitive on sampled chains.
  std::mt19937_64 rng(7);
  long checked = 0;
  for (const auto& s : set.shocks) {
    if (s.level < 2 || checked > 200) break;
    const ChildResult c1 = child(s, maps);
    if (!c1.child) continue;
    const ChildResult c2 = child(*c1.child, maps);
    if (!c2.child) continue;
    ++checked;
    CHECK(is_ancestor(*c1.child, {s.level, s.index}, maps));
    CHECK(is_ancestor(*c2.child, {s.level, s.index}, maps));
  }
}
