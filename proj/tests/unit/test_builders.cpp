#include <gtest/gtest.h>

#include <cmath>

#include "lipquot/builders.hpp"
#include "lipquot/errors.hpp"
#include "lipquot/instances.hpp"
#include "lipquot/tree_gen.hpp"
#include "oracle.hpp"

using namespace lipquot;

namespace {

MetricTree segment(std::size_t n, double length = 1.0) {
  std::vector<double> xs;
  std::vector<Edge> e;
  for (Index k = 0; k < n; ++k) {
    xs.push_back(length * static_cast<double>(k) / static_cast<double>(n - 1));
    if (k) e.emplace_back(k - 1, k);
  }
  return MetricTree(FiniteMetricSpace::on_line(xs), e);
}

MetricTree tripod(std::size_t leg) {
  std::vector<Edge> e;
  Index next = 1;
  for (int l = 0; l < 3; ++l) {
    Index prev = 0;
    for (std::size_t k = 0; k < leg; ++k) {
      e.emplace_back(prev, next);
      prev = next++;
    }
  }
  return MetricTree(path_metric(next, e, std::vector<double>(e.size(), 1.0)), e);
}

}  // namespace

TEST(ArcMap, MonotoneSegment) {
  const MetricTree s = segment(21);
  const auto f = build_arc_map(s, 0.0, 1.0);
  EXPECT_EQ(f.front(), 0.0);
  EXPECT_EQ(f.back(), 1.0);
  const LightnessReport r = measure_lightness(s.space(), f);
  EXPECT_NEAR(r.lipschitz, 1.0, 1e-12);
  EXPECT_NEAR(r.lightness, 1.0, 1e-12);
}

TEST(ArcMap, EqualEndsFoldIntoATent) {
  const MetricTree s = segment(11);
  const auto f = build_arc_map(s, 0.0, 0.0);
  EXPECT_EQ(f.front(), 0.0);
  EXPECT_EQ(f.back(), 0.0);
  for (Index k = 0; k < 11; ++k) EXPECT_NEAR(f[k], std::min(k / 10.0, 1 - k / 10.0), 1e-12);
}

TEST(ArcMap, EndpointsExactAndLightOnSnowflakes) {
  Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    const MetricTree s = segment(uniform_size(rng, 2, 40));
    const MetricTree flake(s.space().snowflaked(0.6), s.edges());
    const double a = uniform_real(rng, -1, 1), b = uniform_real(rng, -1, 1);
    const auto f = build_arc_map(flake, a, b);
    EXPECT_EQ(f.front(), a);
    EXPECT_EQ(f.back(), b);
    EXPECT_TRUE(std::isfinite(measure_lightness(flake.space(), f).lightness));
  }
  EXPECT_THROW(build_arc_map(tripod(2), 0, 1), PreconditionError);
}

TEST(TwoPiece, EmptySecondPiece) {
  Rng rng(72);
  const FiniteMetricSpace s = random_planar_space(rng, 10);
  std::vector<double> f(10);
  for (Index x = 0; x < 10; ++x) f[x] = s(0, x);
  const TwoPieceReport r = glue_two_piece_check(s, f, all_indices(10), {});
  EXPECT_DOUBLE_EQ(r.q_union, r.q_first);
  EXPECT_TRUE(r.passes);
}

TEST(TwoPiece, RandomSplits) {
  Rng rng(73);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = uniform_size(rng, 3, 20);
    const FiniteMetricSpace s = random_planar_space(rng, n);
    std::vector<double> f(n);
    const Index c = uniform_size(rng, 0, n - 1);
    for (Index x = 0; x < n; ++x) f[x] = s(c, x);
    IndexSet a, b;
    for (Index x = 0; x < n; ++x) (uniform_size(rng, 0, 1) ? a : b).push_back(x);
    const TwoPieceReport r = glue_two_piece_check(s, f, a, b);
    const double q = std::max(r.q_first, r.q_second);
    EXPECT_DOUBLE_EQ(r.bound, 2 * q * (q + 2) + 1);
    EXPECT_LE(r.q_union, r.bound);
  }
}

TEST(GlueSubset, WholeTreeIsUnchanged) {
  const MetricTree t = tripod(3);
  const auto f = tree_map(t);
  const GlueResult g = glue_subset_components(t, {all_indices(t.size()), f}, {});
  EXPECT_EQ(g.values, f);
}

TEST(GlueSubset, StarWithLegsAsComponents) {
  const MetricTree t = tripod(4);
  // X = arc between the tips of legs one and two; leg three hangs off 0.
  const IndexSet x = make_index_set(t.arc(4, 8));
  const Subtree core = induced_subtree(t, x);
  const PieceValues on_x{x, tree_map(core.tree)};
  std::vector<PieceValues> pieces;
  for (const TreeComponent& c : components_minus(t, x)) {
    const Subtree sub = induced_subtree(t, c.closure);
    auto g = tree_map(sub.tree);
    const Index p = c.boundary.front();
    const double anchor = on_x.values[std::lower_bound(x.begin(), x.end(), p) - x.begin()];
    const double shift = anchor - g[*sub.local(p)];
    for (double& v : g) v += shift;
    g[*sub.local(p)] = anchor;
    pieces.push_back({c.closure, g});
  }
  const GlueResult r = glue_subset_components(t, on_x, pieces);
  EXPECT_LE(r.report.l_hat, r.report.l_bound + 1e-9);
  EXPECT_LE(r.report.q_hat, r.report.q_bound + 1e-9);
  EXPECT_DOUBLE_EQ(r.report.l_hat, oracle::lipschitz(t.space(), r.values));
}

TEST(GlueSubset, BoundaryDisagreementNamesTheVertex) {
  const MetricTree t = tripod(2);
  const IndexSet x{0, 1, 2, 3, 4};
  const PieceValues on_x{x, {0, 1, 2, 1, 2}};
  const PieceValues leg{{0, 5, 6}, {0.5, 1, 2}};
  try {
    glue_subset_components(t, on_x, std::vector<PieceValues>{leg});
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find('0'), std::string::npos);
  }
}

TEST(LeafExtension, PathReducesToArcMap) {
  const MetricTree s = segment(15);
  const std::vector<double> ends{0.25, 0.75};
  const LeafExtension e = extend_from_leaves(s, ends);
  EXPECT_EQ(e.values, build_arc_map(s, 0.25, 0.75));
}

TEST(LeafExtension, TripodValuesAndArcs) {
  const MetricTree t = tripod(3);
  const std::vector<double> leaf_values{0, 0, 1};
  const LeafExtension e = extend_from_leaves(t, leaf_values);
  const IndexSet leaves = t.leaves();
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e.values[leaves[k]], leaf_values[k]);
  EXPECT_EQ(e.arcs_filled, 3u);
  // McShane at the centre with constant max(1, L) over the leaves.
  double want = 1e300;
  for (std::size_t k = 0; k < 3; ++k) want = std::min(want, leaf_values[k] + e.mcshane_constant * t(0, leaves[k]));
  EXPECT_DOUBLE_EQ(e.values[0], want);
}

TEST(LeafExtension, RandomCombs) {
  Rng rng(74);
  for (int t = 0; t < 10; ++t) {
    const MetricTree tree = random_tree(rng, 40, TreeProfile::comb);
    const IndexSet leaves = tree.leaves();
    std::vector<double> v;
    for (std::size_t k = 0; k < leaves.size(); ++k) v.push_back(uniform_real(rng, 0, tree.space().diameter()));
    const LeafExtension e = extend_from_leaves(tree, v);
    for (std::size_t k = 0; k < leaves.size(); ++k) EXPECT_EQ(e.values[leaves[k]], v[k]);
    EXPECT_TRUE(std::isfinite(measure_lightness(tree.space(), e.values).lightness));
  }
}

TEST(LeafSubset, AllLeavesMatchesLeafExtension) {
  Rng rng(75);
  const MetricTree tree = random_tree(rng, 20, TreeProfile::geodesic);
  const IndexSet leaves = tree.leaves();
  std::vector<double> v;
  for (std::size_t k = 0; k < leaves.size(); ++k) v.push_back(uniform_real(rng, 0, 1));
  EXPECT_EQ(extend_from_leaf_subset(tree, leaves, v).values, extend_from_leaves(tree, v).values);
}

TEST(LeafSubset, AgreesOnMarkedLeaves) {
  Rng rng(76);
  for (int t = 0; t < 15; ++t) {
    const MetricTree tree = random_tree(rng, 30, TreeProfile(t % 4));
    const IndexSet leaves = tree.leaves();
    IndexSet m = random_subset(rng, leaves.size(), 0.5);
    for (Index& i : m) i = leaves[i];
    std::vector<double> v;
    for (std::size_t k = 0; k < m.size(); ++k) v.push_back(uniform_real(rng, 0, 1));
    const SubsetExtension e = extend_from_leaf_subset(tree, m, v);
    for (std::size_t k = 0; k < m.size(); ++k) EXPECT_EQ(e.values[m[k]], v[k]);
  }
  EXPECT_THROW(extend_from_leaf_subset(tripod(2), {}, std::vector<double>{}), PreconditionError);
}

TEST(TreeMap, ArcAndTripod) {
  const MetricTree s = segment(9);
  const auto f = tree_map(s);
  EXPECT_EQ(f.front(), 0.0);
  EXPECT_EQ(f.back(), 1.0);
  const MetricTree t = tripod(3);
  const LightnessReport r = measure_lightness(t.space(), tree_map(t));
  EXPECT_TRUE(std::isfinite(r.lightness));
  EXPECT_GE(r.lightness, 1.0);
}

TEST(TreeMap, SnowflakedTreesStayLight) {
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    const MetricTree tree = random_tree(rng, 100, TreeProfile::snowflake);
    const LightnessReport r = measure_lightness(tree.space(), tree_map(tree));
    EXPECT_LT(r.lightness, 20.0) << "seed trial " << t;
    EXPECT_LE(r.lipschitz, 4.0);
  }
}

TEST(UnionMap, DisjointPaths) {
  std::vector<std::array<double, 2>> pts;
  for (int k = 0; k < 6; ++k) pts.push_back({k * 0.2, 0});
  for (int k = 0; k < 6; ++k) pts.push_back({50 + k * 0.2, 0});
  const FiniteMetricSpace s = FiniteMetricSpace::euclidean(pts);
  std::vector<UnionPart> parts(2);
  for (Index k = 0; k < 6; ++k) {
    parts[0].vertices.push_back(k);
    parts[1].vertices.push_back(6 + k);
    if (k) {
      parts[0].edges.emplace_back(k - 1, k);
      parts[1].edges.emplace_back(5 + k, 6 + k);
    }
  }
  const UnionMapResult r = union_map(s, parts);
  EXPECT_TRUE(r.passes);
  ASSERT_EQ(r.stages.size(), 2u);
  EXPECT_EQ(r.stages[1].shared, 0u);
  EXPECT_LE(r.stages[1].two_piece.q_union, r.stages[1].two_piece.bound);
}

TEST(UnionMap, CrossingAndCusp) {
  {
    const auto [ambient, parts] = crossing_instance(10);
    const UnionMapResult r = union_map(ambient, parts);
    EXPECT_TRUE(r.passes);
    ASSERT_EQ(r.stages.size(), 2u);
    EXPECT_EQ(r.stages[1].shared, 1u);
  }
  const auto [ambient, parts] = cusp_instance(100);
  EXPECT_EQ(ambient.size(), 200u);
  const UnionMapResult r = union_map(ambient, parts);
  EXPECT_TRUE(r.passes);
  EXPECT_TRUE(std::isfinite(r.q_hat));
  RecordProperty("cusp_q_hat", std::to_string(r.q_hat));
}

TEST(WreathMap, PathAndEqualEnds) {
  const MetricTree s = segment(17);
  const WreathMapResult w = wreath_map(s, 0, 16);
  EXPECT_TRUE(w.folded);
  EXPECT_LE(w.q_wreath, w.bound + 1e-9);
  // Ends already equal: a tripod map sending two tips to the same value.
  const MetricTree t = tripod(3);
  const auto f = tree_map(t);
  const IndexSet leaves = t.leaves();
  for (Index a : leaves)
    for (Index b : leaves)
      if (a < b && f[a] == f[b]) {
        EXPECT_FALSE(wreath_map(t, a, b).folded);
      }
}

TEST(WreathMap, RandomWreaths) {
  Rng rng(78);
  for (int t = 0; t < 30; ++t) {
    const MetricTree tree = random_tree(rng, uniform_size(rng, 4, 40), TreeProfile(t % 4));
    const IndexSet leaves = tree.leaves();
    const WreathMapResult w = wreath_map(tree, leaves.front(), leaves.back());
    EXPECT_LE(w.q_wreath, w.bound + 1e-9);
    EXPECT_DOUBLE_EQ(w.bound, 2 + 2 * w.q_folded);
  }
}

TEST(SumMap, OnePieceAndTwoSegments) {
  const std::vector<double> xs{0, 0.5, 1};
  const FiniteMetricSpace seg = FiniteMetricSpace::on_line(xs).with_basepoint(0);
  const std::vector<FiniteMetricSpace> one{seg};
  const std::vector<std::vector<double>> id{xs};
  const SumSpace s1 = sum(one);
  EXPECT_EQ(sum_map(s1, one, id).values, (std::vector<double>{0, 0.5, 1}));
  const std::vector<FiniteMetricSpace> two{seg, seg};
  const std::vector<std::vector<double>> ids{xs, xs};
  const SumMapResult r = sum_map(sum(two), two, ids);
  EXPECT_TRUE(r.passes);
  EXPECT_LE(r.q, r.bound);
}

TEST(SumMap, TenPieces) {
  Rng rng(79);
  for (int t = 0; t < 10; ++t) {
    const auto pieces = random_pieces(rng, 10, 6);
    std::vector<std::vector<double>> values;
    for (const auto& p : pieces) {
      std::vector<double> v(p.size());
      for (Index x = 0; x < p.size(); ++x) v[x] = p(0, x);
      values.push_back(v);
    }
    const SumMapResult r = sum_map(sum(pieces), pieces, values);
    EXPECT_LE(r.q, r.bound);
  }
}

TEST(QuotientLightness, SinglePointIsIsometry) {
  Rng rng(80);
  const FiniteMetricSpace s = random_planar_space(rng, 10);
  const QuotientLightnessReport r = quotient_map_lightness(s, {3});
  EXPECT_NEAR(r.projection.lightness, 1.0, 1e-12);
  EXPECT_TRUE(r.passes());
}

TEST(QuotientLightness, HalfGivesTwentySix) {
  Rng rng(81);
  const DisconnectedInstance inst = disconnected_instance(rng, 0.5, 3, 8);
  const QuotientLightnessReport r = quotient_map_lightness(inst.space, inst.collapsed, 0.5);
  EXPECT_DOUBLE_EQ(r.bound, 26.0);
  EXPECT_TRUE(r.passes());
}

TEST(QuotientLightness, GeometricSetBothDirections) {
  std::vector<std::array<double, 2>> pts;
  IndexSet y;
  for (int k = 0; k <= 6; ++k) {
    y.push_back(pts.size());
    pts.push_back({std::ldexp(1.0, -k), 0});
  }
  y.push_back(pts.size());
  pts.push_back({0, 0});
  for (int k = 0; k < 6; ++k) pts.push_back({0.3 * k - 0.2, 0.4});
  const FiniteMetricSpace s = FiniteMetricSpace::euclidean(pts);
  const double a = oracle::min_relative_alpha(s, y);
  const QuotientLightnessReport r = quotient_map_lightness(s, y, a * 0.99);
  EXPECT_TRUE(r.passes());
  EXPECT_LE(r.projection.upper, 9 / (a * 0.99) + 8);
}

TEST(QuotientTreeMap, OneLeafAndPathEnds) {
  Rng rng(82);
  const MetricTree tree = random_tree(rng, 20, TreeProfile::geodesic);
  const QuotientTreeMapResult one = quotient_tree_map(tree, {tree.leaves().front()});
  EXPECT_TRUE(one.stages_pass);
  EXPECT_TRUE(std::isfinite(one.q_hat));
  const MetricTree s = segment(12);
  const QuotientTreeMapResult ends = quotient_tree_map(s, {0, 11});
  EXPECT_TRUE(ends.stages_pass);
  EXPECT_EQ(ends.values.size(), 11u);
}

TEST(QuotientTreeMap, RandomTrees) {
  Rng rng(83);
  for (int t = 0; t < 8; ++t) {
    const MetricTree tree = random_tree(rng, uniform_size(rng, 10, 60), TreeProfile(t % 4));
    const QuotientTreeMapResult r = quotient_tree_map(tree, random_subset(rng, tree.size(), 0.15));
    EXPECT_TRUE(r.stages_pass);
    EXPECT_EQ(r.values[0], 0.0);
    EXPECT_TRUE(std::isfinite(r.q_hat));
  }
}
