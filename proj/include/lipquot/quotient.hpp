#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipquot/chains.hpp"
#include "lipquot/metric_space.hpp"
#include "lipquot/tree.hpp"
#include "lipquot/whitney.hpp"

namespace lipquot {

/// X/E with rho([a],[b]) = min{d(a,b), d(a,E) + d(b,E)}.
///
/// Class 0 is [E] and is the basepoint of `space`; the remaining classes are
/// the points of X \ E in increasing order.
struct QuotientSpace {
  IndexSet collapsed;
  FiniteMetricSpace space;
  std::vector<Index> class_of;        // parent point -> class
  std::vector<Index> representative;  // class -> parent point (class 0 -> min of E)

  std::size_t size() const { return space.size(); }
  double operator()(Index c1, Index c2) const { return space(c1, c2); }
  // Classes of a set of parent points, sorted and deduplicated.
  IndexSet classes(const IndexSet& points) const;
};

QuotientSpace quotient(const FiniteMetricSpace& space, const IndexSet& collapsed);

// Quotient of a tree by two of its leaves.
QuotientSpace wreath(const MetricTree& tree, Index a, Index b);

inline constexpr std::size_t kGluePoint = std::numeric_limits<std::size_t>::max();

/// Pointed sum of based spaces; index 0 is the glue point e.
struct SumSpace {
  FiniteMetricSpace space;
  // Sum index -> (piece, local index); e maps to (kGluePoint, 0).
  std::vector<std::pair<std::size_t, Index>> origin;
  // embed[piece][local] -> sum index; basepoints map to 0.
  std::vector<std::vector<Index>> embed;

  std::size_t size() const { return space.size(); }
  std::size_t piece_count() const { return embed.size(); }
};

// Every piece must carry a basepoint.
SumSpace sum(std::span<const FiniteMetricSpace> pieces);

struct IsometryReport {
  double max_deviation = 0.0;
  Index worst_a = 0, worst_b = 0;
  std::size_t pairs = 0;
  bool passes = true;
};

// Compares Z/Y with (Z/X)/(Y/X) under the natural identification.
IsometryReport double_quotient_check(const FiniteMetricSpace& space, const IndexSet& inner,
                                     const IndexSet& outer, double tolerance = kMetricTolerance);

struct WhitneyQuotientReport {
  std::size_t classes = 0;
  bool ultrametric = true;
  bool lower_bound = true;  // eps·u <= rho
  bool upper_bound = true;  // rho <= 2u
  double min_ratio = std::numeric_limits<double>::infinity();  // rho/u over pairs
  double max_ratio = 0.0;
  bool passes() const { return ultrametric && lower_bound && upper_bound; }
};

// On (X ∪ N)/X with u([n1],[n2]) = max{d(n1,X), d(n2,X)}: u is an ultrametric
// and eps·u <= rho <= 2u. `net` must be a valid Whitney net in Z w.r.t. X.
WhitneyQuotientReport whitney_quotient_check(const FiniteMetricSpace& space, const IndexSet& base,
                                             const WhitneyNet& net);

struct WhitneyIsometryReport {
  bool hypothesis_violated = false;  // eps > 1/2: nothing is asserted
  bool surjective = true;
  IsometryReport distances;
  bool passes() const { return !hypothesis_violated && surjective && distances.passes; }
};

// Identity map Y/(Y ∩ (X ∪ N)) -> (X ∪ Y)/(X ∪ N) for an eps-Whitney net N in
// Y w.r.t. X.
WhitneyIsometryReport whitney_isometry_check(const FiniteMetricSpace& space, const IndexSet& base,
                                             const IndexSet& other, const WhitneyNet& net,
                                             double tolerance = kMetricTolerance);

struct ChainLiftResult {
  Chain lifted;  // points of B, scale 8·alpha
  bool truncated = false;
  std::size_t cut = 0;          // i*, when truncated
  double quotient_span = 0.0;   // rho([x],[y]) after orientation
  double lifted_span = 0.0;     // d(w_0, w_max)
  double start_to_collapsed = 0.0;  // d(w_0, E)

  bool in_source = true;
  bool relative_chain = true;
  bool far_from_collapsed = true;  // d(w_0,E) > 2 d(w_0,w_max)
  bool span_bound = true;          // d(w_0,w_max) >= rho([x],[y])/8
  bool passes() const { return in_source && relative_chain && far_from_collapsed && span_bound; }
};

// Lifts a nondegenerate relative alpha-chain of classes in [B ∪ E] ⊂ X/E to a
// nondegenerate relative 8·alpha-chain in B. alpha must lie in (0, 1/8].
ChainLiftResult chain_lift(const FiniteMetricSpace& space, const IndexSet& source,
                           const QuotientSpace& quotient, std::span<const Index> chain,
                           double alpha);

}  // namespace lipquot
