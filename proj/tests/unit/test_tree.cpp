#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lipquot/errors.hpp"
#include "lipquot/instances.hpp"
#include "lipquot/json_io.hpp"
#include "lipquot/lightness.hpp"
#include "lipquot/tree.hpp"
#include "lipquot/tree_gen.hpp"
#include "oracle.hpp"

using namespace lipquot;

namespace {

MetricTree path3() {
  const std::vector<Edge> e{{0, 1}, {1, 2}};
  return MetricTree(path_metric(3, e, {1.0, 1.0}), e);
}

// Centre 0, legs 0-1-2, 0-3-4, 0-5-6 of unit edges.
MetricTree tripod() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}};
  return MetricTree(path_metric(7, e, std::vector<double>(6, 1.0)), e);
}

}  // namespace

TEST(Tree, RejectsNonTrees) {
  const std::vector<double> xs{0, 1, 2};
  const FiniteMetricSpace s = FiniteMetricSpace::on_line(xs);
  EXPECT_THROW(MetricTree(s, {{0, 1}}), InputError);
  EXPECT_THROW(MetricTree(s, {{0, 1}, {1, 2}, {0, 2}}), InputError);
}

TEST(Tree, ArcOnPath) {
  const MetricTree t = path3();
  EXPECT_EQ(t.arc(0, 2), (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(t.arc(1, 1), (std::vector<Index>{1}));
}

TEST(Tree, ArcsMatchBreadthFirstSearch) {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const MetricTree tree = random_tree(rng, 30, TreeProfile::geodesic);
    for (int k = 0; k < 20; ++k) {
      const Index u = uniform_size(rng, 0, 29), v = uniform_size(rng, 0, 29);
      EXPECT_EQ(tree.arc(u, v), oracle::bfs_path(tree, u, v));
    }
  }
}

TEST(Tree, Median) {
  EXPECT_EQ(median(path3(), 0, 1, 2), 1u);
  EXPECT_EQ(median(tripod(), 2, 4, 6), 0u);
  Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    const MetricTree tree = random_tree(rng, 25, TreeProfile::comb);
    for (int k = 0; k < 20; ++k) {
      const Index x = uniform_size(rng, 0, 24), y = uniform_size(rng, 0, 24), z = uniform_size(rng, 0, 24);
      EXPECT_EQ(median(tree, x, y, z), oracle::brute_median(tree, x, y, z));
    }
  }
}

TEST(Tree, ComponentsOfStarMinusCentre) {
  const MetricTree t = tripod();
  const auto comps = components_minus(t, {0});
  ASSERT_EQ(comps.size(), 3u);
  for (const auto& c : comps) {
    EXPECT_EQ(c.boundary, (IndexSet{0}));
    EXPECT_TRUE(contains(c.closure, 0));
    EXPECT_NO_THROW(induced_subtree(t, c.closure));
  }
  const auto whole = components_minus(t, {});
  ASSERT_EQ(whole.size(), 1u);
  EXPECT_EQ(whole[0].vertices, all_indices(7));
}

TEST(Tree, ComponentClosuresAreTrees) {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const MetricTree tree = random_tree(rng, 30, TreeProfile::geodesic);
    const IndexSet removed = random_subset(rng, 30, 0.2);
    for (const auto& c : components_minus(tree, removed)) {
      const Subtree sub = induced_subtree(tree, c.closure);
      EXPECT_EQ(sub.tree.size(), c.closure.size());
      EXPECT_TRUE(validate_metric(sub.tree.space()).valid());
    }
  }
}

TEST(Tree, Hull) {
  const MetricTree t = tripod();
  EXPECT_EQ(hull(t, {2, 4}), (IndexSet{0, 1, 2, 3, 4}));
  EXPECT_EQ(hull(t, {2, 6}), make_index_set(t.arc(2, 6)));
  EXPECT_EQ(hull(t, t.leaves()), all_indices(7));
  // Direct union of arcs.
  Rng rng(34);
  const MetricTree tree = random_tree(rng, 30, TreeProfile::geodesic);
  const IndexSet m = random_subset(rng, 30, 0.15);
  std::vector<Index> u;
  for (Index a : m)
    for (Index b : m)
      for (Index v : oracle::bfs_path(tree, a, b)) u.push_back(v);
  EXPECT_EQ(hull(tree, m), make_index_set(u));
}

TEST(Tree, Retraction) {
  const MetricTree t = tripod();
  const auto g = retract_to_arc(t, 2, 4);
  for (Index x : t.arc(2, 4)) EXPECT_EQ(g[x], x);
  EXPECT_EQ(g[6], 0u);
  Rng rng(35);
  for (int k = 0; k < 5; ++k) {
    const MetricTree tree = random_tree(rng, 30, TreeProfile::snowflake);
    const auto leaves = tree.leaves();
    const auto r = retract_to_arc(tree, leaves.front(), leaves.back());
    // 1-Lipschitz: check every pair directly.
    for (Index a = 0; a < tree.size(); ++a)
      for (Index b = 0; b < tree.size(); ++b)
        EXPECT_LE(tree(r[a], r[b]), tree(a, b) * (1 + 1e-9) + 1e-12);
  }
}

TEST(Tree, RemetrizeSandwich) {
  const MetricTree geo = gen_tree(20, 5);
  EXPECT_EQ(remetrize_1bt(geo).space(), geo.space());
  TreeGenOptions snow;
  snow.profile = TreeProfile::snowflake;
  snow.snowflake_s = 0.6;
  const MetricTree flake = gen_tree(20, 5, snow);
  const MetricTree rf = remetrize_1bt(flake);
  for (Index a = 0; a < 20; ++a)
    for (Index b = 0; b < 20; ++b) EXPECT_NEAR(rf(a, b), flake(a, b), 1e-12);

  // A Euclidean tree with C > 1.
  const std::vector<std::array<double, 2>> pts{{0, 0}, {0, 1}, {1, 1}, {1, 0}, {2, 0}};
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  const MetricTree zig(FiniteMetricSpace::euclidean(pts), e);
  const double C = bounded_turning_constant(zig);
  EXPECT_NEAR(C, std::sqrt(2.0), 1e-12);
  const MetricTree r = remetrize_1bt(zig);
  for (Index a = 0; a < 5; ++a)
    for (Index b = 0; b < 5; ++b) {
      EXPECT_LE(r(a, b) / C, zig(a, b) + 1e-12);
      EXPECT_LE(zig(a, b), r(a, b) + 1e-12);
    }
  EXPECT_NEAR(bounded_turning_constant(r), 1.0, 1e-9);
}

TEST(Tree, BoundedTurningOfVShape) {
  const std::vector<std::array<double, 2>> pts{{-1, 1}, {0, 0}, {1, 1}};
  const MetricTree v(FiniteMetricSpace::euclidean(pts), {{0, 1}, {1, 2}});
  // Exhaustive pair scan.
  double worst = 1.0;
  for (Index a = 0; a < 3; ++a)
    for (Index b = a + 1; b < 3; ++b) {
      const auto arc = oracle::bfs_path(v, a, b);
      worst = std::max(worst, v.space().diameter(arc) / v(a, b));
    }
  EXPECT_DOUBLE_EQ(bounded_turning_constant(v), worst);
  EXPECT_DOUBLE_EQ(bounded_turning_constant(gen_tree(30, 2)), 1.0);
}

TEST(Tree, SnowflakedPathIsOneBoundedTurning) {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  const MetricTree p(path_metric(5, e, std::vector<double>(4, 1.0)).snowflaked(0.5), e);
  EXPECT_NEAR(bounded_turning_constant(p), 1.0, 1e-12);
  TreeGenOptions s1;
  s1.profile = TreeProfile::snowflake;
  s1.snowflake_s = 1.0;
  EXPECT_EQ(gen_tree(15, 9, s1).space(), gen_tree(15, 9).space());
}

TEST(Tree, SeparatedPointsOnComb) {
  // Spine 0..6 with a two-edge tooth on spine vertices 2, 3, 4.
  std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
  Index next = 7;
  for (Index s = 2; s <= 4; ++s) {
    e.emplace_back(s, next);
    e.emplace_back(next, next + 1);
    next += 2;
  }
  const MetricTree comb(path_metric(next, e, std::vector<double>(e.size(), 1.0)), e);
  const SepPointsReport r = sep_points(comb, 2, 4, 1.5);
  ASSERT_EQ(r.pairs.size(), 3u);
  EXPECT_EQ(r.pairs.size(), set_intersection(comb.branch_points(), make_index_set(comb.arc(2, 4))).size());
  for (std::size_t i = 0; i < r.pairs.size(); ++i)
    for (std::size_t j = i + 1; j < r.pairs.size(); ++j)
      EXPECT_GE(comb(r.pairs[i].b, r.pairs[j].b), 1.5);
  EXPECT_TRUE(r.bounds_hold);
  // An arc ending at a leaf violates the distance-to-leaves requirement.
  EXPECT_THROW(sep_points(comb, 0, 4, 1.5), PreconditionError);
  // A degenerate arc at a vertex of degree two.
  EXPECT_TRUE(sep_points(comb, 5, 5, 0.5).pairs.empty());
}

TEST(Tree, JsonRoundTrip) {
  Rng rng(37);
  const MetricTree t = random_tree(rng, 25, TreeProfile::vicsek);
  EXPECT_EQ(tree_from_json(Json::parse(tree_to_json(t).dump())), t);
}
