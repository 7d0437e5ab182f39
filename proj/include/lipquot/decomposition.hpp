#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipquot/chains.hpp"
#include "lipquot/quotient.hpp"
#include "lipquot/tree.hpp"

namespace lipquot {

struct CoproductPieceQuotient {
  TreeComponent component;   // T_i is component.closure, M_i is component.boundary
  QuotientSpace quotient;    // T_i/M_i over the local indices of component.closure
};

struct PreCoproduct {
  QuotientSpace quotient;  // T/M
  std::vector<CoproductPieceQuotient> pieces;
  SumSpace sum;  // sum of the T_i/M_i
  // Class of T/M -> index of the sum; [M] -> e.
  std::vector<Index> to_sum;
  // rho/sigma over distinct pairs.
  double min_ratio = 1.0;
  double max_ratio = 1.0;
  std::pair<Index, Index> min_pair{0, 0};
  bool passes = true;  // ratios within [1/2, 1]
};

// Tree must be 1-bounded turning (checked) and M nonempty.
PreCoproduct pre_coproduct_decompose(const MetricTree& tree, const IndexSet& marked);

enum class PieceKind { tree, wreath };
std::string to_string(PieceKind kind);

struct CoproductPiece {
  TreeComponent component;
  PieceKind kind = PieceKind::tree;
};

struct CoproductDecomposition {
  IndexSet hull_vertices;  // S
  IndexSet hull_branch;    // B, branch points of S
  IndexSet collapsed;      // B ∪ M
  std::vector<CoproductPiece> pieces;
  PreCoproduct comparison;  // T/(B ∪ M) against the sum of its pieces
};

// M must consist of leaves. A component meeting B ∪ M in other than one or
// two points raises StructuralError.
CoproductDecomposition coproduct_decompose(const MetricTree& tree, const IndexSet& marked);

struct BranchDisconnectReport {
  std::size_t doubling = 1;
  bool doubling_exact = true;
  double bound = 0.0;       // 1/(8 D^2)
  double alpha_star = 1.0;  // exact constant of [B ∪ L] in T/L
  std::size_t classes = 0;  // |[B ∪ L]|
  // A nondegenerate relative chain at alpha = bound, if the search found one.
  std::optional<Chain> witness;
  bool passes = true;
};

// Remetrizes, measures D, collapses the leaves, and searches every pair of
// [B ∪ L] for a relative chain at 1/(8 D^2).
BranchDisconnectReport branch_uniform_disconnect_check(const MetricTree& tree);

}  // namespace lipquot
