#include "lipquot/decomposition.hpp"

#include <algorithm>
#include <string>

#include "lipquot/errors.hpp"

namespace lipquot {

namespace {

void require_one_bounded_turning(const MetricTree& tree, const char* who) {
  const TurningReport turning = bounded_turning(tree);
  if (turning.value > 1.0 + 1e-9) {
    throw PreconditionError(std::string(who) + ": tree is not 1-bounded turning (C = " +
                            std::to_string(turning.value) + " at " + std::to_string(turning.u) +
                            "," + std::to_string(turning.v) + "); remetrize first");
  }
}

}  // namespace

PreCoproduct pre_coproduct_decompose(const MetricTree& tree, const IndexSet& marked) {
  if (marked.empty()) throw PreconditionError("pre_coproduct_decompose: M must be nonempty");
  require_one_bounded_turning(tree, "pre_coproduct_decompose");

  PreCoproduct out;
  out.quotient = quotient(tree.space(), marked);
  std::vector<FiniteMetricSpace> piece_spaces;
  for (TreeComponent& comp : components_minus(tree, marked)) {
    IndexSet local_boundary;
    for (std::size_t k = 0; k < comp.closure.size(); ++k)
      if (contains(comp.boundary, comp.closure[k])) local_boundary.push_back(k);
    QuotientSpace q = quotient(tree.space().subspace(comp.closure), local_boundary);
    piece_spaces.push_back(q.space);
    out.pieces.push_back({std::move(comp), std::move(q)});
  }
  out.sum = sum(piece_spaces);

  out.to_sum.assign(out.quotient.size(), 0);
  for (std::size_t p = 0; p < out.pieces.size(); ++p) {
    const auto& piece = out.pieces[p];
    for (std::size_t k = 0; k < piece.component.closure.size(); ++k) {
      const Index x = piece.component.closure[k];
      if (contains(marked, x)) continue;
      out.to_sum[out.quotient.class_of[x]] = out.sum.embed[p][piece.quotient.class_of[k]];
    }
  }

  const std::size_t m = out.quotient.size();
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double ratio = out.quotient(a, b) / out.sum.space(out.to_sum[a], out.to_sum[b]);
      if (ratio < out.min_ratio) {
        out.min_ratio = ratio;
        out.min_pair = {a, b};
      }
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  }
  out.passes = out.min_ratio >= 0.5 - 1e-9 && out.max_ratio <= 1.0 + 1e-9;
  return out;
}

std::string to_string(PieceKind kind) { return kind == PieceKind::tree ? "TREE" : "WREATH"; }

CoproductDecomposition coproduct_decompose(const MetricTree& tree, const IndexSet& marked) {
  if (marked.empty()) throw PreconditionError("coproduct_decompose: M must be nonempty");
  for (Index m : marked)
    if (!tree.is_leaf(m))
      throw PreconditionError("coproduct_decompose: vertex " + std::to_string(m) +
                              " is not a leaf");

  CoproductDecomposition out;
  out.hull_vertices = hull(tree, marked);
  for (Index v : out.hull_vertices) {
    const auto& nb = tree.neighbors(v);
    const auto inside = std::count_if(nb.begin(), nb.end(),
                                      [&](Index w) { return contains(out.hull_vertices, w); });
    if (inside >= 3) out.hull_branch.push_back(v);
  }
  out.collapsed = set_union(out.hull_branch, marked);

  for (TreeComponent& comp : components_minus(tree, out.collapsed)) {
    const std::size_t touching = comp.boundary.size();
    if (touching != 1 && touching != 2) {
      throw StructuralError("coproduct_decompose: component at vertex " +
                            std::to_string(comp.vertices.front()) + " meets B ∪ M in " +
                            std::to_string(touching) + " points");
    }
    out.pieces.push_back({std::move(comp), touching == 2 ? PieceKind::wreath : PieceKind::tree});
  }
  out.comparison = pre_coproduct_decompose(tree, out.collapsed);
  return out;
}

BranchDisconnectReport branch_uniform_disconnect_check(const MetricTree& input) {
  const MetricTree tree = remetrize_1bt(input);
  BranchDisconnectReport report;
  const DoublingEstimate doubling = doubling_constant(tree.space());
  report.doubling = doubling.value;
  report.doubling_exact = doubling.exact;
  report.bound = 1.0 / (8.0 * double(doubling.value) * double(doubling.value));

  const IndexSet leaves = tree.leaves();
  const QuotientSpace q = quotient(tree.space(), leaves);
  IndexSet subset = q.classes(set_union(tree.branch_points(), leaves));
  report.classes = subset.size();
  report.alpha_star = uniform_disconnectedness_constant(q.space, subset);

  for (std::size_t a = 0; a < subset.size() && !report.witness; ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      auto chain = find_relative_alpha_chain(q.space, subset[a], subset[b], report.bound, subset);
      if (chain) {
        report.witness = std::move(chain);
        break;
      }
    }
  }
  report.passes = !report.witness.has_value();
  return report;
}

}  // namespace lipquot
