#include "lipquot/freespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipquot/detail/transport.hpp"
#include "lipquot/errors.hpp"

namespace lipquot {

namespace detail {
template <>
struct Tolerance<Rational> {
  static Rational value() { return Rational(0); }
};
}  // namespace detail

namespace {

Index require_basepoint(const FiniteMetricSpace& space, const char* who) {
  if (!space.basepoint()) throw PreconditionError(std::string(who) + ": space has no basepoint");
  return *space.basepoint();
}

template <class T>
std::vector<std::vector<T>> cost_matrix(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<std::vector<T>> cost(n, std::vector<T>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cost[i][j] = T(space(i, j));
  return cost;
}

template <class T>
detail::FlowSolution<T> transport(const FiniteMetricSpace& space, const FreeVector& mu) {
  const Index base = require_basepoint(space, "free_norm");
  std::vector<T> supply(space.size(), T(0));
  T total(0);
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    if (mu.support[k] == base) continue;
    supply[mu.support[k]] += T(mu.coeffs[k]);
    total += T(mu.coeffs[k]);
  }
  supply[base] -= total;
  return detail::min_cost_flow(cost_matrix<T>(space), supply);
}

template <class T>
struct DualSolution {
  T value{0};
  std::vector<T> potential;
};

// max sum a_i f(x_i) over 1-Lipschitz f vanishing on `fixed`. With m the
// distance to `fixed`, g = f + m is nonnegative and the zero vector is
// feasible, so the slack basis starts the simplex.
template <class T>
DualSolution<T> lipschitz_lp(const FiniteMetricSpace& space, const FreeVector& mu,
                             const IndexSet& fixed) {
  const std::size_t n = space.size();
  std::vector<T> weight(n, T(0));
  for (std::size_t k = 0; k < mu.support.size(); ++k) weight[mu.support[k]] += T(mu.coeffs[k]);

  const IndexSet vars = set_difference(all_indices(n), fixed);
  std::vector<T> reach(n, T(0));
  for (Index i : vars) reach[i] = T(space.distance_to(i, fixed));

  DualSolution<T> out;
  out.potential.assign(n, T(0));
  if (vars.empty()) return out;
  const std::size_t k = vars.size();
  std::vector<std::vector<T>> A;
  std::vector<T> b;
  auto clamp = [](T v) { return v < T(0) ? T(0) : v; };
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) {
      if (p == q) continue;
      std::vector<T> row(k, T(0));
      row[p] = T(1);
      row[q] = T(-1);
      A.push_back(std::move(row));
      b.push_back(clamp(T(space(vars[p], vars[q])) + reach[vars[p]] - reach[vars[q]]));
    }
    std::vector<T> row(k, T(0));
    row[p] = T(1);
    A.push_back(std::move(row));
    b.push_back(T(2) * reach[vars[p]]);
  }
  std::vector<T> c(k);
  T offset(0);
  for (std::size_t p = 0; p < k; ++p) {
    c[p] = weight[vars[p]];
    offset += weight[vars[p]] * reach[vars[p]];
  }
  const auto lp = detail::simplex_max(A, b, c);
  if (!lp) throw SolverError("Lipschitz LP reported unbounded; the metric is likely invalid");
  out.value = lp->value - offset;
  for (std::size_t p = 0; p < k; ++p) out.potential[vars[p]] = lp->x[p] - reach[vars[p]];
  return out;
}

IndexSet with_basepoint(const FiniteMetricSpace& space, const IndexSet& subset, const char* who) {
  const Index base = require_basepoint(space, who);
  return set_union(subset, IndexSet{base});
}

FreeVector restrict_to(const FreeVector& mu, const std::vector<Index>& local_of,
                       std::size_t local_size) {
  std::vector<Index> support;
  std::vector<double> coeffs;
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    const Index l = local_of[mu.support[k]];
    if (l == kGluePoint) continue;
    support.push_back(l);
    coeffs.push_back(mu.coeffs[k]);
  }
  return make_free_vector(std::move(support), std::move(coeffs), local_size);
}

}  // namespace

FreeVector make_free_vector(std::vector<Index> support, std::vector<double> coeffs,
                            std::size_t space_size) {
  if (support.size() != coeffs.size())
    throw InputError("free vector: support and coefficients differ in length");
  FreeVector out;
  std::vector<char> seen(space_size, 0);
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= space_size)
      throw InputError("free vector: support index " + std::to_string(support[k]) +
                       " out of range");
    if (seen[support[k]])
      throw InputError("free vector: support index " + std::to_string(support[k]) + " repeated");
    seen[support[k]] = 1;
    if (!std::isfinite(coeffs[k])) throw InputError("free vector: non-finite coefficient");
    if (coeffs[k] == 0.0) continue;
    out.support.push_back(support[k]);
    out.coeffs.push_back(coeffs[k]);
  }
  return out;
}

FreeVector push_forward(const FreeVector& mu, std::span<const Index> map, std::size_t target_size) {
  std::vector<double> mass(target_size, 0.0);
  std::vector<char> hit(target_size, 0);
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    mass[map[mu.support[k]]] += mu.coeffs[k];
    hit[map[mu.support[k]]] = 1;
  }
  FreeVector out;
  for (Index t = 0; t < target_size; ++t) {
    if (hit[t] && mass[t] != 0.0) {
      out.support.push_back(t);
      out.coeffs.push_back(mass[t]);
    }
  }
  return out;
}

FreeNormResult free_norm_detailed(const FiniteMetricSpace& space, const FreeVector& mu) {
  const Index base = require_basepoint(space, "free_norm");
  FreeNormResult out;
  const auto flow = transport<double>(space, mu);
  out.primal = flow.cost;
  out.flow = flow.flow;
  const auto dual = lipschitz_lp<double>(space, mu, IndexSet{base});
  out.dual = dual.value;
  out.potential = dual.potential;
  out.gap = std::abs(out.primal - out.dual);
  if (out.gap > kDualityGap)
    throw SolverError("free_norm: flow value " + std::to_string(out.primal) +
                      " and LP value " + std::to_string(out.dual) + " disagree");
  return out;
}

double free_norm(const FiniteMetricSpace& space, const FreeVector& mu) {
  return free_norm_detailed(space, mu).primal;
}

ConstrainedNormResult constrained_dual_norm(const FiniteMetricSpace& space, const FreeVector& mu,
                                            const IndexSet& subset) {
  if (subset.empty()) throw PreconditionError("constrained_dual_norm: A is empty");
  const auto dual =
      lipschitz_lp<double>(space, mu, with_basepoint(space, subset, "constrained_dual_norm"));
  return {dual.value, dual.potential};
}

Rational free_norm_flow_exact(const FiniteMetricSpace& space, const FreeVector& mu) {
  return transport<Rational>(space, mu).cost;
}

Rational constrained_dual_norm_exact(const FiniteMetricSpace& space, const FreeVector& mu,
                                     const IndexSet& subset) {
  if (subset.empty()) throw PreconditionError("constrained_dual_norm: A is empty");
  return lipschitz_lp<Rational>(space, mu, with_basepoint(space, subset, "constrained_dual_norm"))
      .value;
}

namespace {

std::pair<QuotientSpace, FreeVector> quotient_side(const FiniteMetricSpace& space,
                                                   const IndexSet& subset, const FreeVector& mu) {
  const IndexSet collapsed = with_basepoint(space, subset, "quotient_duality_check");
  QuotientSpace q = quotient(space, collapsed);
  FreeVector pushed = push_forward(mu, q.class_of, q.size());
  return {std::move(q), std::move(pushed)};
}

}  // namespace

QuotientDualityReport quotient_duality_check(const FiniteMetricSpace& space, const IndexSet& subset,
                                             const FreeVector& mu) {
  QuotientDualityReport report;
  report.constrained = constrained_dual_norm(space, mu, subset).value;
  const auto [q, pushed] = quotient_side(space, subset, mu);
  report.quotient_norm = free_norm(q.space, pushed);
  report.gap = std::abs(report.constrained - report.quotient_norm);
  report.passes = report.gap <= kDualityGap;
  return report;
}

ExactQuotientDuality quotient_duality_exact(const FiniteMetricSpace& space, const IndexSet& subset,
                                            const FreeVector& mu) {
  ExactQuotientDuality out;
  out.constrained = constrained_dual_norm_exact(space, mu, subset);
  const auto [q, pushed] = quotient_side(space, subset, mu);
  out.quotient_norm = free_norm_flow_exact(q.space, pushed);
  out.equal = out.constrained == out.quotient_norm;
  return out;
}

std::vector<std::pair<FiniteMetricSpace, std::vector<Index>>> sum_pieces(const SumSpace& sum) {
  std::vector<std::pair<FiniteMetricSpace, std::vector<Index>>> out;
  for (std::size_t p = 0; p < sum.piece_count(); ++p) {
    std::vector<Index> members{0};
    for (Index s : sum.embed[p])
      if (s != 0) members.push_back(s);
    std::sort(members.begin(), members.end());
    std::vector<Index> local_of(sum.size(), kGluePoint);
    for (std::size_t k = 0; k < members.size(); ++k) local_of[members[k]] = k;
    out.emplace_back(sum.space.subspace(members).with_basepoint(0), std::move(local_of));
  }
  return out;
}

SumDecompositionReport sum_decomposition_check(const SumSpace& sum, const FreeVector& mu) {
  SumDecompositionReport report;
  report.whole = free_norm(sum.space.with_basepoint(0), mu);
  for (const auto& [piece, local_of] : sum_pieces(sum)) {
    const double v = free_norm(piece, restrict_to(mu, local_of, piece.size()));
    report.pieces.push_back(v);
    report.piece_total += v;
  }
  report.gap = std::abs(report.whole - report.piece_total);
  report.passes = report.gap <= kDualityGap;
  return report;
}

ExactSumDecomposition sum_decomposition_exact(const SumSpace& sum, const FreeVector& mu) {
  ExactSumDecomposition out;
  out.whole = free_norm_flow_exact(sum.space.with_basepoint(0), mu);
  for (const auto& [piece, local_of] : sum_pieces(sum))
    out.piece_total += free_norm_flow_exact(piece, restrict_to(mu, local_of, piece.size()));
  out.equal = out.whole == out.piece_total;
  return out;
}

BiLipschitzNormReport bilipschitz_norm_comparison(const FiniteMetricSpace& a,
                                                  const FiniteMetricSpace& b,
                                                  std::span<const Index> correspondence,
                                                  const FreeVector& mu, double lambda) {
  if (a.size() != b.size() || correspondence.size() != a.size())
    throw PreconditionError("bilipschitz_norm_comparison: sizes do not match");
  std::vector<char> hit(b.size(), 0);
  for (Index t : correspondence) {
    if (t >= b.size() || hit[t])
      throw PreconditionError("bilipschitz_norm_comparison: correspondence is not a bijection");
    hit[t] = 1;
  }
  const Index base_a = require_basepoint(a, "bilipschitz_norm_comparison");
  const Index base_b = require_basepoint(b, "bilipschitz_norm_comparison");
  if (correspondence[base_a] != base_b)
    throw PreconditionError("bilipschitz_norm_comparison: basepoints do not correspond");

  BiLipschitzNormReport report;
  report.lower = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = i + 1; j < a.size(); ++j) {
      const double r = b(correspondence[i], correspondence[j]) / a(i, j);
      report.lower = std::min(report.lower, r);
      report.upper = std::max(report.upper, r);
    }
  }
  if (a.size() < 2) report.lower = report.upper = 1.0;
  report.norm_a = free_norm(a, mu);
  report.norm_b = free_norm(b, push_forward(mu, correspondence, b.size()));
  if (report.norm_a > 0.0) report.ratio = report.norm_b / report.norm_a;
  else if (report.norm_b > 0.0) report.ratio = std::numeric_limits<double>::infinity();
  const double slack = 1e-6;
  report.within_distortion =
      report.ratio >= report.lower * (1.0 - slack) && report.ratio <= report.upper * (1.0 + slack);
  report.within_lambda =
      report.ratio >= (1.0 / lambda) * (1.0 - slack) && report.ratio <= lambda * (1.0 + slack);
  return report;
}

}  // namespace lipquot
