#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lipquot/metric_space.hpp"

namespace lipquot {

struct Chain {
  std::vector<Index> indices;
  // δ for a δ-chain, α for a relative α-chain.
  double scale = 0.0;

  Index first() const { return indices.front(); }
  Index last() const { return indices.back(); }
  std::size_t size() const { return indices.size(); }
};

// Consecutive distances at most delta.
bool is_delta_chain(const FiniteMetricSpace& space, std::span<const Index> chain, double delta,
                    double tolerance = kMetricTolerance);

// Consecutive distances at most alpha * d(first, last).
bool is_relative_alpha_chain(const FiniteMetricSpace& space, std::span<const Index> chain,
                             double alpha, double tolerance = kMetricTolerance);

// Relative alpha-chain whose endpoints are distinct points.
bool is_nondegenerate_relative_chain(const FiniteMetricSpace& space, std::span<const Index> chain,
                                     double alpha, double tolerance = kMetricTolerance);

// Partition of `subset` into delta-components (classes of the threshold graph
// d <= delta). Classes are sorted and listed by smallest member.
std::vector<IndexSet> delta_components(const FiniteMetricSpace& space, const IndexSet& subset,
                                       double delta);

// Fewest-hop relative alpha-chain from x to y through points of `subset`
// (the whole space when empty), or nullopt when none exists. x and y must be
// distinct members of the subset.
std::optional<Chain> find_relative_alpha_chain(const FiniteMetricSpace& space, Index x, Index y,
                                               double alpha, const IndexSet& subset = {});

struct DisconnectednessReport {
  // Supremum of alpha admitting no nondegenerate relative alpha-chain. At
  // alpha == value a chain exists (the defining inequality is non-strict).
  double value = 1.0;
  // Pair realizing the minimum bottleneck ratio.
  Index x = 0, y = 0;
  // Largest step on the best x-y route.
  double bottleneck = 0.0;
};

// Exact: for each pair the smallest admissible alpha is the minimax edge of
// the pair divided by their distance; the constant is the minimum of those.
DisconnectednessReport uniform_disconnectedness(const FiniteMetricSpace& space,
                                                const IndexSet& subset);
double uniform_disconnectedness_constant(const FiniteMetricSpace& space, const IndexSet& subset);

}  // namespace lipquot
