#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lipquot/decomposition.hpp"
#include "lipquot/lightness.hpp"
#include "lipquot/metric_space.hpp"
#include "lipquot/quotient.hpp"
#include "lipquot/tree.hpp"

namespace lipquot {

// Values along an ordered path of points with f(path.front()) = a and
// f(path.back()) = b exactly. The base map sends the path onto [0, diam] by
// recursive bisection at half the diameter; it is then scaled (when
// |a - b| >= diam) or folded (otherwise) and translated to the targets.
std::vector<double> arc_values(const FiniteMetricSpace& space, std::span<const Index> path,
                               double a, double b);

// Map of an arc (a tree with no branch points) sending its lower-numbered
// endpoint to a and the other endpoint to b. Throws PreconditionError if the
// tree has a branch point.
std::vector<double> build_arc_map(const MetricTree& arc, double a, double b);

struct TwoPieceReport {
  double q_first = 0.0;
  double q_second = 0.0;
  double q_union = 0.0;
  double bound = 0.0;  // 2Q(Q+2)+1 with Q the larger piece constant
  bool passes = true;
};

// Lightness of f on A ∪ B against the lightness of its restrictions.
TwoPieceReport glue_two_piece_check(const FiniteMetricSpace& space, std::span<const double> values,
                                    const IndexSet& first, const IndexSet& second);

struct PieceValues {
  IndexSet vertices;           // tree vertices, sorted
  std::vector<double> values;  // aligned with vertices
};

struct GlueReport {
  double l0 = 0.0;  // largest Lipschitz constant among the pieces
  double q0 = 0.0;  // largest lightness constant among the pieces
  double l_hat = 0.0;
  double q_hat = 0.0;
  double l_bound = 0.0;  // 2 L0
  double q_bound = 0.0;  // 6 (2 L0) Q0^2
  // Every arc vertex between the endpoints of the lightness witness chain lies
  // within the witness radius of the chain.
  bool chain_neighbourhood_ok = true;
  double chain_neighbourhood_excess = 0.0;
  bool passes = true;
};

struct GlueResult {
  std::vector<double> values;  // on every tree vertex
  GlueReport report;
};

// Glues a map on X with maps on the closures of the components of T - X. The
// closures must be exactly those of components_minus(tree, X), and every piece
// must agree with the map on X at its boundary. Piece constants are measured
// on the closures. The tree must be 1-bounded turning.
GlueResult glue_subset_components(const MetricTree& tree, const PieceValues& on_subset,
                                  std::span<const PieceValues> pieces);

// Audit of an already assembled map against the pieces it was built from.
GlueReport audit_glue(const MetricTree& tree, const IndexSet& subset,
                      std::span<const double> values);

struct LeafExtension {
  std::vector<double> values;
  double mcshane_constant = 1.0;  // Lipschitz constant used on L ∪ B
  std::size_t arcs_filled = 0;
  // Arcs whose endpoint values differ by more than the arc diameter; these are
  // filled with a clamped arc map plus a linear correction.
  std::size_t gap_repairs = 0;
};

// Extends values given on the leaves (aligned with tree.leaves()) to the whole
// 1-bounded-turning tree: McShane onto leaves and branch points, then one arc
// map per complementary arc.
LeafExtension extend_from_leaves(const MetricTree& tree, std::span<const double> leaf_values);

// Map of a 1-bounded-turning tree: an arc map on a diameter-realizing leaf
// pair, and recursively a map of each hanging subtree translated to agree
// with the arc at its attachment point.
std::vector<double> tree_map(const MetricTree& tree);

struct SubsetExtension {
  std::vector<double> values;
  std::size_t gap_repairs = 0;
  GlueReport glue;  // hull against the hanging subtrees
};

// Extends values given on a set M of leaves (aligned with `marked`) to the
// whole tree: extend_from_leaves on the hull of M, tree_map on every hanging
// subtree.
SubsetExtension extend_from_leaf_subset(const MetricTree& tree, const IndexSet& marked,
                                        std::span<const double> marked_values);

struct UnionPart {
  IndexSet vertices;        // ambient indices
  std::vector<Edge> edges;  // ambient indices
};

struct UnionStage {
  std::size_t shared = 0;      // |X_{k-1} ∩ T_k|
  std::size_t components = 0;  // components of T_k minus the shared part
  double turning = 1.0;        // measured C of T_k in the ambient metric
  std::optional<GlueReport> glue;
  TwoPieceReport two_piece;
};

struct UnionMapResult {
  std::vector<double> values;  // on the ambient space
  std::vector<UnionStage> stages;
  double l_hat = 0.0;
  double q_hat = 0.0;
  bool passes = true;
};

// Map on a union of 1-bounded-turning trees T_0, ..., T_k sitting in one
// ambient metric. T_0 gets tree_map; each later tree is extended from its
// intersection with the earlier ones. Vertices outside every part keep the
// value 0 and are ignored.
UnionMapResult union_map(const FiniteMetricSpace& ambient, std::span<const UnionPart> parts);

// Two segments from the origin in the plane, one along the x-axis and one
// along y = x^2, with 100 and 101 points; the union has 200 points.
std::pair<FiniteMetricSpace, std::vector<UnionPart>> cusp_instance(std::size_t per_curve = 100);
// Two crossing segments, as a plus sign with four arms sharing the centre.
std::pair<FiniteMetricSpace, std::vector<UnionPart>> crossing_instance(std::size_t per_arm = 25);

struct WreathMapResult {
  QuotientSpace quotient;
  std::vector<double> values;  // on the classes
  std::vector<double> tree_values;   // tree_map on T
  std::vector<double> folded_values; // after folding so that f(a) = f(b)
  bool folded = false;
  double q_tree = 0.0;
  double q_folded = 0.0;
  double q_wreath = 0.0;
  double l_folded = 0.0;
  double l_wreath = 0.0;
  double bound = 0.0;  // 2 + 2 q_folded
  bool passes = true;
};

// Map of the wreath T/{a,b} for leaves a, b of a 1-bounded-turning tree.
WreathMapResult wreath_map(const MetricTree& tree, Index a, Index b);

struct SumMapResult {
  std::vector<double> values;  // on the sum
  std::vector<double> piece_q;
  std::vector<double> piece_l;
  double q = 0.0;
  double l = 0.0;
  // 2 + 2 max piece_q. Not a proven bound: checked empirically.
  double bound = 0.0;
  bool passes = true;
};

// Combines maps on the pieces (each vanishing at its basepoint) into a map of
// the pointed sum.
SumMapResult sum_map(const SumSpace& sum, std::span<const FiniteMetricSpace> pieces,
                     std::span<const std::vector<double>> piece_values);

struct QuotientLightnessReport {
  double alpha_star = 1.0;
  double alpha = 1.0;  // the alpha asked for, or alpha_star minus a tolerance
  bool alpha_admissible = true;  // alpha < alpha_star
  MetricLightnessReport projection;
  double bound = 0.0;  // 9/alpha + 8
  bool bound_holds = true;
  double beta = 0.0;  // 0.9 / Q
  std::optional<Chain> converse_witness;
  bool converse_holds = true;
  bool passes() const { return alpha_admissible && bound_holds && converse_holds; }
};

// Measures the lightness of X -> X/Y and compares it with the uniform
// disconnectedness constant of Y, in both directions. Without `alpha` the
// bound is taken just below the measured constant.
QuotientLightnessReport quotient_map_lightness(const FiniteMetricSpace& space,
                                               const IndexSet& collapsed,
                                               std::optional<double> alpha = std::nullopt);

struct PieceStage {
  std::size_t vertices = 0;
  std::size_t marked = 0;
  std::size_t tree_pieces = 0;
  std::size_t wreath_pieces = 0;
  std::vector<double> wreath_q;  // q_wreath of each wreath piece
  std::vector<double> tree_q;    // q of each tree piece
  double sum_q = 0.0;            // lightness on T_i/(B_i ∪ M_i)
  double sum_bound = 0.0;        // 2 + 2 max piece q (empirical)
  double alpha_star = 1.0;       // [B_i ∪ M_i] in T_i/M_i
  double doubling_bound = 0.0;   // 1/(8 D^2)
  std::size_t doubling = 1;
  MetricLightnessReport projection;  // T_i/M_i -> T_i/(B_i ∪ M_i)
  double projection_bound = 0.0;     // 9/alpha_star + 8
  double composite_q = 0.0;          // on T_i/M_i
  double composite_l = 0.0;
  bool wreath_ok = true;
  bool disconnect_ok = true;
};

struct QuotientTreeMapResult {
  PreCoproduct decomposition;
  std::vector<PieceStage> stages;
  std::vector<double> values;  // on T/M
  double l_hat = 0.0;
  double q_hat = 0.0;
  double final_bound = 0.0;  // 2 + 2 max composite_q (empirical)
  bool stages_pass = true;
};

// Lipschitz light map of T/M for a 1-bounded-turning tree T: split T/M into
// the T_i/M_i, send each through T_i/(B_i ∪ M_i) and its TREE/WREATH pieces,
// and reassemble through the sums.
QuotientTreeMapResult quotient_tree_map(const MetricTree& tree, const IndexSet& marked);

}  // namespace lipquot
