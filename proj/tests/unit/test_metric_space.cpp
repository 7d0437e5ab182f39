#include <gtest/gtest.h>

#include "lipquot/errors.hpp"
#include "lipquot/extension.hpp"
#include "lipquot/instances.hpp"
#include "lipquot/lightness.hpp"
#include "lipquot/metric_space.hpp"
#include "oracle.hpp"

using namespace lipquot;

TEST(Validation, HonestTriangle) {
  const std::vector<std::array<double, 2>> pts{{0, 0}, {3, 0}, {0, 4}};
  EXPECT_TRUE(validate_metric(FiniteMetricSpace::euclidean(pts)).valid());
}

TEST(Validation, TriangleViolationIsLocated) {
  const FiniteMetricSpace s(std::vector<std::vector<double>>{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  const ValidationReport r = validate_metric(s);
  ASSERT_FALSE(r.triangle.empty());
  EXPECT_EQ(r.triangle.front().i, 0u);
  EXPECT_EQ(r.triangle.front().j, 1u);
  EXPECT_EQ(r.triangle.front().k, 2u);
  EXPECT_DOUBLE_EQ(r.triangle.front().excess, 3.0);
}

TEST(Validation, AsymmetryAndDiagonal) {
  const FiniteMetricSpace s(std::vector<std::vector<double>>{{0, 1}, {2, 0}});
  EXPECT_FALSE(validate_metric(s).symmetry.empty());
  const FiniteMetricSpace t(std::vector<std::vector<double>>{{1, 1}, {1, 0}});
  EXPECT_FALSE(validate_metric(t).diagonal.empty());
  const FiniteMetricSpace u(std::vector<std::vector<double>>{{0, 0}, {0, 0}});
  EXPECT_FALSE(validate_metric(u).positivity.empty());
}

TEST(Space, SubspaceKeepsDistancesAndBasepoint) {
  Rng rng(3);
  const FiniteMetricSpace s = random_planar_space(rng, 8).with_basepoint(5);
  const std::vector<Index> sub{1, 5, 7};
  const FiniteMetricSpace t = s.subspace(sub);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.basepoint(), std::optional<Index>(1));
  for (Index a = 0; a < 3; ++a)
    for (Index b = 0; b < 3; ++b) EXPECT_EQ(t(a, b), s(sub[a], sub[b]));
}

TEST(Space, SnowflakeIsAMetric) {
  Rng rng(4);
  const FiniteMetricSpace s = random_planar_space(rng, 12).snowflaked(0.6);
  EXPECT_TRUE(validate_metric(s).valid());
}

TEST(Doubling, SinglePoint) {
  const std::vector<double> xs{0.0};
  EXPECT_EQ(doubling_constant(FiniteMetricSpace::on_line(xs)).value, 1u);
}

TEST(Doubling, MatchesExhaustiveCover) {
  const std::vector<double> line{0, 1, 2};
  const FiniteMetricSpace l = FiniteMetricSpace::on_line(line);
  EXPECT_EQ(doubling_constant(l).value, oracle::exhaustive_doubling(l));
  const std::vector<std::array<double, 2>> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const FiniteMetricSpace sq = FiniteMetricSpace::euclidean(square);
  EXPECT_EQ(doubling_constant(sq).value, oracle::exhaustive_doubling(sq));
  Rng rng(11);
  for (int t = 0; t < 15; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, uniform_size(rng, 2, 9));
    const DoublingEstimate d = doubling_constant(s);
    EXPECT_TRUE(d.exact);
    EXPECT_EQ(d.value, oracle::exhaustive_doubling(s)) << "trial " << t;
  }
}

TEST(Doubling, GreedyIsAnUpperBound) {
  Rng rng(12);
  for (int t = 0; t < 5; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, 10);
    const DoublingEstimate greedy = doubling_constant(s, 0);
    EXPECT_FALSE(greedy.exact);
    EXPECT_GE(greedy.value, oracle::exhaustive_doubling(s));
  }
}

TEST(McShane, IdentityOnWholeSpace) {
  Rng rng(5);
  const FiniteMetricSpace s = random_planar_space(rng, 6);
  const IndexSet all = all_indices(6);
  std::vector<double> f(6);
  for (Index i = 0; i < 6; ++i) f[i] = s(0, i);
  EXPECT_EQ(mcshane_extend(s, all, f, 1.0), f);
}

TEST(McShane, SinglePointGivesDistance) {
  Rng rng(6);
  const FiniteMetricSpace s = random_planar_space(rng, 7);
  const std::vector<Index> a{3};
  const std::vector<double> v{0.0};
  const auto F = mcshane_extend(s, a, v, 1.0);
  for (Index x = 0; x < 7; ++x) EXPECT_DOUBLE_EQ(F[x], s(x, 3));
}

TEST(McShane, PreservesLipschitzConstant) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, 12);
    IndexSet sub = random_subset(rng, 12, 0.33);
    std::vector<double> v;
    for (std::size_t k = 0; k < sub.size(); ++k) v.push_back(uniform_real(rng, 0, 1));
    const double L = std::max(lipschitz_constant_on(s, sub, v), 1e-3);
    const auto F = mcshane_extend(s, sub, v, L);
    for (std::size_t k = 0; k < sub.size(); ++k) EXPECT_EQ(F[sub[k]], v[k]);
    EXPECT_LE(oracle::lipschitz(s, F), L * (1 + 1e-9));
  }
}

TEST(McShane, RejectsTooSmallConstant) {
  const std::vector<double> xs{0, 1};
  const std::vector<Index> sub{0, 1};
  const std::vector<double> v{0, 2};
  EXPECT_THROW(mcshane_extend(FiniteMetricSpace::on_line(xs), sub, v, 1.0), LipschitzViolation);
}
