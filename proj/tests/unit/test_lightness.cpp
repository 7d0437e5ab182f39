#include <gtest/gtest.h>

#include <cmath>

#include "lipquot/instances.hpp"
#include "lipquot/lightness.hpp"
#include "oracle.hpp"

using namespace lipquot;

TEST(Lipschitz, ConstantAndIdentity) {
  const std::vector<double> xs{0, 0.5, 2, 3.25};
  const FiniteMetricSpace s = FiniteMetricSpace::on_line(xs);
  const std::vector<double> zero(4, 7.0);
  EXPECT_EQ(measure_lipschitz(s, zero).value, 0.0);
  EXPECT_DOUBLE_EQ(measure_lipschitz(s, xs).value, 1.0);
}

TEST(Lipschitz, MatchesPairScan) {
  Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, 15);
    std::vector<double> f(15);
    for (double& v : f) v = uniform_real(rng, -1, 1);
    EXPECT_DOUBLE_EQ(measure_lipschitz(s, f).value, oracle::lipschitz(s, f));
  }
}

TEST(Lightness, IdentityOnThreePoints) {
  const std::vector<double> xs{0, 1, 2};
  EXPECT_DOUBLE_EQ(measure_lightness(FiniteMetricSpace::on_line(xs), xs).lightness, 1.0);
}

TEST(Lightness, ConstantOnTwoPoints) {
  const std::vector<double> xs{0, 1};
  const std::vector<double> f{0, 0};
  const FiniteMetricSpace s = FiniteMetricSpace::on_line(xs);
  EXPECT_DOUBLE_EQ(measure_lightness(s, f).lightness, 1.0);
  EXPECT_DOUBLE_EQ(oracle::grid_lightness(s, f).at_critical, 1.0);
}

TEST(Lightness, TwoClusters) {
  // Cluster A at 0, 0.1, 0.3 and cluster B at 10, 10.2, mapped to 0 and 1.
  const std::vector<double> xs{0, 0.1, 0.3, 10, 10.2};
  const std::vector<double> f{0, 0, 0, 1, 1};
  const FiniteMetricSpace s = FiniteMetricSpace::on_line(xs);
  const LightnessReport r = measure_lightness(s, f);
  const auto o = oracle::grid_lightness(s, f);
  EXPECT_DOUBLE_EQ(r.lightness, o.at_critical);
  EXPECT_LE(o.on_grid, r.lightness + 1e-12);
  // Cluster A merges at radius 0.2 into diameter 0.3.
  EXPECT_NEAR(r.lightness, 1.5, 1e-12);
}

TEST(Lightness, WitnessReproducesTheRatio) {
  Rng rng(62);
  for (int t = 0; t < 20; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, 10);
    std::vector<double> f(10);
    for (double& v : f) v = uniform_real(rng, 0, 1);
    const LightnessReport r = measure_lightness(s, f);
    const auto& w = r.witness;
    EXPECT_DOUBLE_EQ(s(w.a, w.b), w.diameter);
    EXPECT_NEAR(w.diameter / w.radius, r.lightness, 1e-12);
    for (Index x : w.component) {
      EXPECT_GE(f[x], w.window_low);
      EXPECT_LE(f[x], w.window_low + w.radius);
    }
  }
}

TEST(Lightness, MatchesDenseGridOracle) {
  Rng rng(63);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = uniform_size(rng, 2, 12);
    const FiniteMetricSpace s = random_planar_space(rng, n);
    std::vector<double> f(n);
    for (double& v : f) v = uniform_real(rng, 0, 1);
    const double q = measure_lightness(s, f).lightness;
    const auto o = oracle::grid_lightness(s, f);
    EXPECT_DOUBLE_EQ(q, o.at_critical) << "trial " << t;
    EXPECT_LE(o.on_grid, q * (1 + 1e-12));
  }
}

TEST(Fold, Cases) {
  const std::vector<double> f{0.0, 0.25, 1.0};
  EXPECT_EQ(fold(f, 2.0), f);
  const std::vector<double> ends{0.0, 1.0};
  EXPECT_EQ(fold(ends, 0.5), (std::vector<double>{0.0, 0.0}));
  Rng rng(64);
  for (int t = 0; t < 20; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, 12);
    std::vector<double> g(12);
    for (double& v : g) v = uniform_real(rng, 0, 1);
    EXPECT_LE(measure_lipschitz(s, fold(g, uniform_real(rng, 0, 1))).value,
              measure_lipschitz(s, g).value + 1e-9);
  }
}

TEST(MetricLightness, LineTargetAgreesWithRealValued) {
  Rng rng(65);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = uniform_size(rng, 2, 10);
    const FiniteMetricSpace s = random_planar_space(rng, n);
    std::vector<double> f(n);
    for (double& v : f) v = uniform_real(rng, 0, 1);
    const FiniteMetricSpace target = FiniteMetricSpace::on_line(f);
    const std::vector<Index> image = all_indices(n);
    const MetricLightnessReport m = measure_metric_lightness(s, target, image);
    ASSERT_TRUE(m.exact);
    EXPECT_NEAR(m.lightness, measure_lightness(s, f).lightness, 1e-12);
  }
}

TEST(MetricLightness, IdentityIsOne) {
  Rng rng(66);
  const FiniteMetricSpace s = random_planar_space(rng, 9);
  const std::vector<Index> image = all_indices(9);
  EXPECT_NEAR(measure_metric_lightness(s, s, image).lightness, 1.0, 1e-12);
}

TEST(MetricLightness, BoundsBracketTheExactValue) {
  Rng rng(67);
  for (int t = 0; t < 10; ++t) {
    const FiniteMetricSpace s = random_planar_space(rng, 14);
    const FiniteMetricSpace target = random_planar_space(rng, 14);
    std::vector<Index> image(14);
    for (Index& i : image) i = uniform_size(rng, 0, 13);
    const MetricLightnessReport exact = measure_metric_lightness(s, target, image);
    const MetricLightnessReport approx = measure_metric_lightness(s, target, image, 0);
    ASSERT_TRUE(exact.exact);
    EXPECT_FALSE(approx.exact);
    EXPECT_LE(approx.lower, exact.lightness * (1 + 1e-12));
    EXPECT_GE(approx.upper, exact.lightness * (1 - 1e-12));
  }
}
