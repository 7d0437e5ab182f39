#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipquot/chains.hpp"
#include "lipquot/metric_space.hpp"

namespace lipquot {

using Edge = std::pair<Index, Index>;

/// A combinatorial tree whose vertices are the points of a finite metric space.
///
/// Leaves are vertices of degree at most one, branch points vertices of degree
/// at least three. Hop distances and rooted parents are tabulated for every
/// root, so arc queries cost O(length).
class MetricTree {
 public:
  MetricTree() = default;
  // Throws InputError unless `edges` form a spanning tree of the space.
  MetricTree(FiniteMetricSpace space, std::vector<Edge> edges,
             std::optional<double> declared_C = std::nullopt,
             std::optional<double> declared_D = std::nullopt);

  const FiniteMetricSpace& space() const noexcept { return space_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return space_.size(); }
  double operator()(Index u, Index v) const noexcept { return space_(u, v); }

  const std::vector<Index>& neighbors(Index v) const { return adjacency_[v]; }
  std::size_t degree(Index v) const { return adjacency_[v].size(); }
  bool is_leaf(Index v) const { return degree(v) <= 1; }
  bool is_branch(Index v) const { return degree(v) >= 3; }
  IndexSet leaves() const;
  IndexSet branch_points() const;

  std::size_t hops(Index u, Index v) const { return hops_[u * size() + v]; }
  // Neighbour of v one step closer to root; root maps to itself.
  Index parent(Index root, Index v) const { return parent_[root * size() + v]; }
  // Vertices of the unique path from u to v, in order.
  std::vector<Index> arc(Index u, Index v) const;
  bool on_arc(Index x, Index u, Index v) const { return hops(u, x) + hops(x, v) == hops(u, v); }

  std::optional<double> declared_C() const noexcept { return declared_C_; }
  std::optional<double> declared_D() const noexcept { return declared_D_; }
  void set_declared(std::optional<double> C, std::optional<double> D) {
    declared_C_ = C;
    declared_D_ = D;
  }

 private:
  FiniteMetricSpace space_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> adjacency_;
  std::vector<std::size_t> hops_;
  std::vector<Index> parent_;
  std::optional<double> declared_C_, declared_D_;
};

bool operator==(const MetricTree& a, const MetricTree& b);

// The common vertex of arc(x,y), arc(x,z) and arc(y,z).
Index median(const MetricTree& tree, Index x, Index y, Index z);

struct TreeComponent {
  IndexSet vertices;  // a component of the forest T minus E
  IndexSet boundary;  // vertices of E adjacent to the component
  IndexSet closure;   // vertices plus boundary
};

// Components of the forest left after deleting the vertex set E. Edges joining
// two vertices of E carry no material and produce no component.
std::vector<TreeComponent> components_minus(const MetricTree& tree, const IndexSet& removed);

struct Subtree {
  MetricTree tree;
  // Local vertex k is parent vertex to_parent[k]; to_parent is increasing.
  std::vector<Index> to_parent;

  std::optional<Index> local(Index parent_vertex) const;
};

// Subtree induced by a vertex set that is connected in the tree.
Subtree induced_subtree(const MetricTree& tree, const IndexSet& vertices);

// Union of arcs between members of M (M must be nonempty).
IndexSet hull(const MetricTree& tree, const IndexSet& marked);

// The retraction onto arc(u,v): identity on the arc, u or v when the arc is
// reached through an endpoint, the median of (u,v,x) otherwise.
std::vector<Index> retract_to_arc(const MetricTree& tree, Index u, Index v);

// diam(arc(u,v)) for every pair, row-major.
std::vector<double> arc_diameters(const MetricTree& tree);

// Same tree with d'(u,v) = diam_d(arc(u,v)); declared C becomes 1.
MetricTree remetrize_1bt(const MetricTree& tree);

struct TurningReport {
  double value = 1.0;
  Index u = 0, v = 0;
};
TurningReport bounded_turning(const MetricTree& tree);
double bounded_turning_constant(const MetricTree& tree);

struct SepPair {
  Index a, b;
  double distance;  // d(a,b)
};

struct SepPointsReport {
  std::vector<SepPair> pairs;
  double d_max = 0.0;
  double arc_diameter = 0.0;
  double min_pair_distance = 0.0;  // over distinct b's; +inf when fewer than two
  double max_pair_distance = 0.0;
  bool bounds_hold = true;  // eps <= d(b_i,b_j) <= 2 d_max + diam(arc)
};

// For each branch point a on arc(u,v), a point b in a component of T - {a}
// missing the arc: the first vertex with d(a,b) >= eps along a path from a to
// a leaf, the path being chosen to make d(a,b) smallest. Throws
// PreconditionError naming the offending vertex when some arc vertex lies
// within eps of the leaves.
SepPointsReport sep_points(const MetricTree& tree, Index u, Index v, double eps);

// Largest distance from a vertex of arc(first, last) to the chain; at most
// delta for every delta-chain in a 1-bounded-turning tree.
double arc_distance_to_chain(const MetricTree& tree, std::span<const Index> chain);

}  // namespace lipquot
