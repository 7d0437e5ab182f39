#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipquot/metric_space.hpp"

namespace lipquot {

struct WhitneyNet {
  IndexSet net;
  // Net points in the order they were accepted.
  std::vector<Index> accepted;
  double epsilon = 0.5;
  IndexSet target;  // A
  IndexSet source;  // B

  // Covering radius factor eps/(1-eps); infinite at eps = 1.
  double epsilon_prime() const;
};

// Greedy net: walks `order` (ascending indices of B when empty) and accepts a
// point of B\A whenever it stays separated from everything accepted so far.
// The result is maximal because the separation test only tightens as the
// net grows. A must be nonempty; eps must lie in (0,1].
WhitneyNet whitney_net(const FiniteMetricSpace& space, const IndexSet& source,
                       const IndexSet& target, double epsilon,
                       std::span<const Index> order = {});

struct WhitneyAudit {
  bool separated = true;
  bool maximal = true;
  bool inside_source = true;
  std::optional<std::pair<Index, Index>> separation_witness;
  // A point of B\(A∪N) that could still be added.
  std::optional<Index> addable;

  bool valid() const { return separated && maximal && inside_source; }
};

WhitneyAudit audit_whitney_net(const FiniteMetricSpace& space, const WhitneyNet& net);

struct WhitneyCoverage {
  std::size_t checked = 0;
  // Points x of B\A with no net point within eps'·d(x,A).
  std::vector<Index> violations;
  // Largest observed min_u d(x,u) / d(x,A).
  double worst_ratio = 0.0;
};

WhitneyCoverage whitney_coverage(const FiniteMetricSpace& space, const WhitneyNet& net);

}  // namespace lipquot
