#include "lipquot/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipquot/errors.hpp"

namespace lipquot {

IndexSet QuotientSpace::classes(const IndexSet& points) const {
  std::vector<Index> out;
  out.reserve(points.size());
  for (Index p : points) out.push_back(class_of[p]);
  return make_index_set(std::move(out));
}

QuotientSpace quotient(const FiniteMetricSpace& space, const IndexSet& collapsed) {
  if (collapsed.empty()) throw PreconditionError("quotient: collapsed set must be nonempty");
  for (Index e : collapsed)
    if (e >= space.size()) throw InputError("quotient: collapsed index out of range");

  QuotientSpace q;
  q.collapsed = collapsed;
  const std::size_t n = space.size();
  q.class_of.assign(n, 0);
  q.representative.push_back(collapsed.front());
  for (Index x = 0; x < n; ++x) {
    if (contains(collapsed, x)) continue;
    q.class_of[x] = q.representative.size();
    q.representative.push_back(x);
  }

  const std::size_t m = q.representative.size();
  std::vector<double> to_e(m, 0.0);
  for (Index c = 1; c < m; ++c) to_e[c] = space.distance_to(q.representative[c], collapsed);
  std::vector<double> rho(m * m, 0.0);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double v = a == 0 ? to_e[b]
                              : std::min(space(q.representative[a], q.representative[b]),
                                         to_e[a] + to_e[b]);
      rho[a * m + b] = v;
      rho[b * m + a] = v;
    }
  }
  std::vector<std::string> ids;
  ids.reserve(m);
  ids.push_back("[" + space.ids()[collapsed.front()] + (collapsed.size() > 1 ? ",...]" : "]"));
  for (Index c = 1; c < m; ++c) ids.push_back(space.ids()[q.representative[c]]);
  q.space = FiniteMetricSpace(std::move(ids), std::move(rho), Index{0});
  return q;
}

QuotientSpace wreath(const MetricTree& tree, Index a, Index b) {
  if (a == b || a >= tree.size() || b >= tree.size() || tree.degree(a) != 1 ||
      tree.degree(b) != 1) {
    throw PreconditionError("wreath: need two distinct degree-one vertices");
  }
  return quotient(tree.space(), make_index_set({a, b}));
}

SumSpace sum(std::span<const FiniteMetricSpace> pieces) {
  SumSpace s;
  s.origin.push_back({kGluePoint, 0});
  std::vector<std::string> ids{"e"};
  s.embed.resize(pieces.size());
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    if (!pieces[p].basepoint()) {
      throw PreconditionError("sum: piece " + std::to_string(p) + " has no basepoint");
    }
    const Index base = *pieces[p].basepoint();
    s.embed[p].assign(pieces[p].size(), 0);
    for (Index x = 0; x < pieces[p].size(); ++x) {
      if (x == base) continue;
      s.embed[p][x] = s.origin.size();
      s.origin.push_back({p, x});
      ids.push_back(std::to_string(p) + ":" + pieces[p].ids()[x]);
    }
  }

  const std::size_t m = s.origin.size();
  std::vector<double> sigma(m * m, 0.0);
  auto to_base = [&](Index k) {
    const auto [p, x] = s.origin[k];
    return pieces[p](x, *pieces[p].basepoint());
  };
  for (Index a = 1; a < m; ++a) {
    sigma[a] = sigma[a * m] = to_base(a);
    for (Index b = a + 1; b < m; ++b) {
      const auto [pa, xa] = s.origin[a];
      const auto [pb, xb] = s.origin[b];
      const double v = pa == pb ? pieces[pa](xa, xb) : to_base(a) + to_base(b);
      sigma[a * m + b] = v;
      sigma[b * m + a] = v;
    }
  }
  s.space = FiniteMetricSpace(std::move(ids), std::move(sigma), Index{0});
  return s;
}

IsometryReport double_quotient_check(const FiniteMetricSpace& space, const IndexSet& inner,
                                     const IndexSet& outer, double tolerance) {
  if (inner.empty() || outer.empty())
    throw PreconditionError("double_quotient_check: sets must be nonempty");
  if (!std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()))
    throw PreconditionError("double_quotient_check: inner set is not contained in outer set");

  const QuotientSpace direct = quotient(space, outer);
  const QuotientSpace first = quotient(space, inner);
  const QuotientSpace second = quotient(first.space, first.classes(outer));

  IsometryReport report;
  for (Index a = 0; a < space.size(); ++a) {
    for (Index b = a + 1; b < space.size(); ++b) {
      const double lhs = direct(direct.class_of[a], direct.class_of[b]);
      const double rhs =
          second(second.class_of[first.class_of[a]], second.class_of[first.class_of[b]]);
      ++report.pairs;
      const double dev = std::abs(lhs - rhs);
      if (dev > report.max_deviation) {
        report.max_deviation = dev;
        report.worst_a = a;
        report.worst_b = b;
      }
    }
  }
  report.passes = report.max_deviation < tolerance;
  return report;
}

WhitneyQuotientReport whitney_quotient_check(const FiniteMetricSpace& space, const IndexSet& base,
                                             const WhitneyNet& net) {
  if (!audit_whitney_net(space, net).valid())
    throw PreconditionError("whitney_quotient_check: invalid Whitney net");
  const IndexSet carrier = set_union(base, net.net);
  const FiniteMetricSpace sub = space.subspace(carrier);
  IndexSet local_base;
  for (std::size_t k = 0; k < carrier.size(); ++k)
    if (contains(base, carrier[k])) local_base.push_back(k);
  const QuotientSpace q = quotient(sub, local_base);

  const std::size_t m = q.size();
  std::vector<double> height(m, 0.0);
  for (Index c = 1; c < m; ++c) height[c] = space.distance_to(carrier[q.representative[c]], base);
  auto u = [&](Index a, Index b) { return a == b ? 0.0 : std::max(height[a], height[b]); };

  WhitneyQuotientReport report;
  report.classes = m;
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double rho = q(a, b);
      const double ub = u(a, b);
      report.min_ratio = std::min(report.min_ratio, rho / ub);
      report.max_ratio = std::max(report.max_ratio, rho / ub);
      if (net.epsilon * ub > rho + kMetricTolerance) report.lower_bound = false;
      if (rho > 2.0 * ub + kMetricTolerance) report.upper_bound = false;
      for (Index c = 0; c < m; ++c)
        if (u(a, b) > std::max(u(a, c), u(c, b)) + kMetricTolerance) report.ultrametric = false;
    }
  }
  return report;
}

WhitneyIsometryReport whitney_isometry_check(const FiniteMetricSpace& space, const IndexSet& base,
                                             const IndexSet& other, const WhitneyNet& net,
                                             double tolerance) {
  WhitneyIsometryReport report;
  if (net.epsilon > 0.5) {
    report.hypothesis_violated = true;
    return report;
  }
  const IndexSet marked = set_union(base, net.net);
  const IndexSet left_collapsed = set_intersection(other, marked);
  if (left_collapsed.empty())
    throw PreconditionError("whitney_isometry_check: Y misses X ∪ N entirely");

  auto local_indices = [](const IndexSet& carrier, const IndexSet& subset) {
    IndexSet out;
    for (std::size_t k = 0; k < carrier.size(); ++k)
      if (contains(subset, carrier[k])) out.push_back(k);
    return out;
  };
  const QuotientSpace left =
      quotient(space.subspace(other), local_indices(other, left_collapsed));
  const IndexSet right_carrier = set_union(base, other);
  const QuotientSpace right =
      quotient(space.subspace(right_carrier), local_indices(right_carrier, marked));

  auto right_class = [&](Index y) {
    const auto k = std::lower_bound(right_carrier.begin(), right_carrier.end(), y) -
                   right_carrier.begin();
    return right.class_of[static_cast<Index>(k)];
  };
  std::vector<char> hit(right.size(), 0);
  for (std::size_t k = 0; k < other.size(); ++k) hit[right_class(other[k])] = 1;
  report.surjective = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });

  for (std::size_t a = 0; a < other.size(); ++a) {
    for (std::size_t b = a + 1; b < other.size(); ++b) {
      const double lhs = left(left.class_of[a], left.class_of[b]);
      const double rhs = right(right_class(other[a]), right_class(other[b]));
      ++report.distances.pairs;
      const double dev = std::abs(lhs - rhs);
      if (dev > report.distances.max_deviation) {
        report.distances.max_deviation = dev;
        report.distances.worst_a = other[a];
        report.distances.worst_b = other[b];
      }
    }
  }
  report.distances.passes = report.distances.max_deviation < tolerance;
  return report;
}

ChainLiftResult chain_lift(const FiniteMetricSpace& space, const IndexSet& source,
                           const QuotientSpace& q, std::span<const Index> chain, double alpha) {
  if (!(alpha > 0.0) || alpha > 0.125)
    throw PreconditionError("chain_lift: alpha must lie in (0, 1/8]");
  for (Index c : chain) {
    if (c >= q.size()) throw PreconditionError("chain_lift: class index out of range");
    if (c != 0 && !contains(source, q.representative[c]))
      throw PreconditionError("chain_lift: chain leaves [B ∪ E]");
  }
  if (!is_nondegenerate_relative_chain(q.space, chain, alpha))
    throw PreconditionError("chain_lift: input is not a nondegenerate relative alpha-chain");

  std::vector<Index> z(chain.begin(), chain.end());
  if (q(z.back(), 0) > q(z.front(), 0)) std::reverse(z.begin(), z.end());

  // Loop erasure: consecutive steps of the result are steps of the input.
  std::vector<Index> simple;
  for (Index c : z) {
    auto it = std::find(simple.begin(), simple.end(), c);
    if (it != simple.end())
      simple.erase(it + 1, simple.end());
    else
      simple.push_back(c);
  }

  ChainLiftResult result;
  const Index x = simple.front();
  const double x_to_e = q(x, 0);
  result.quotient_span = q(x, simple.back());

  std::size_t stop = simple.size();
  for (std::size_t i = 0; i < simple.size(); ++i) {
    if (q(x, simple[i]) >= 0.5 * x_to_e) {
      stop = i;
      break;
    }
  }
  result.truncated = stop < simple.size();
  result.cut = stop;

  result.lifted.scale = 8.0 * alpha;
  for (std::size_t i = 0; i < stop; ++i) {
    if (simple[i] == 0) throw StructuralError("chain_lift: collapsed class inside the lift");
    result.lifted.indices.push_back(q.representative[simple[i]]);
  }

  const auto& w = result.lifted.indices;
  result.in_source = std::all_of(w.begin(), w.end(), [&](Index p) { return contains(source, p); });
  result.relative_chain = is_nondegenerate_relative_chain(space, w, 8.0 * alpha);
  if (!w.empty()) {
    result.lifted_span = space(w.front(), w.back());
    result.start_to_collapsed = space.distance_to(w.front(), q.collapsed);
  }
  result.far_from_collapsed = result.start_to_collapsed > 2.0 * result.lifted_span;
  result.span_bound = result.lifted_span >= result.quotient_span / 8.0 - kMetricTolerance;
  return result;
}

}  // namespace lipquot
