#include "lipquot/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "lipquot/errors.hpp"

namespace lipquot {

MetricTree::MetricTree(FiniteMetricSpace space, std::vector<Edge> edges,
                       std::optional<double> declared_C, std::optional<double> declared_D)
    : space_(std::move(space)),
      edges_(std::move(edges)),
      declared_C_(declared_C),
      declared_D_(declared_D) {
  const std::size_t n = space_.size();
  if (n == 0) {
    if (!edges_.empty()) throw InputError("tree: edges given for an empty space");
    return;
  }
  if (edges_.size() != n - 1) {
    throw InputError("tree: " + std::to_string(edges_.size()) + " edges for " +
                     std::to_string(n) + " vertices, expected " + std::to_string(n - 1));
  }
  adjacency_.assign(n, {});
  for (const auto& [a, b] : edges_) {
    if (a >= n || b >= n) throw InputError("tree: edge endpoint out of range");
    if (a == b) throw InputError("tree: self loop at vertex " + std::to_string(a));
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

  constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
  hops_.assign(n * n, unseen);
  parent_.assign(n * n, n);
  std::vector<Index> queue(n);
  for (Index root = 0; root < n; ++root) {
    std::size_t* h = hops_.data() + root * n;
    Index* p = parent_.data() + root * n;
    std::size_t head = 0, tail = 0;
    queue[tail++] = root;
    h[root] = 0;
    p[root] = root;
    while (head < tail) {
      const Index x = queue[head++];
      for (Index y : adjacency_[x]) {
        if (h[y] != unseen) continue;
        h[y] = h[x] + 1;
        p[y] = x;
        queue[tail++] = y;
      }
    }
    if (tail != n) throw InputError("tree: edge set is not connected");
  }
}

IndexSet MetricTree::leaves() const {
  IndexSet out;
  for (Index v = 0; v < size(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

IndexSet MetricTree::branch_points() const {
  IndexSet out;
  for (Index v = 0; v < size(); ++v)
    if (is_branch(v)) out.push_back(v);
  return out;
}

std::vector<Index> MetricTree::arc(Index u, Index v) const {
  std::vector<Index> path;
  path.reserve(hops(u, v) + 1);
  for (Index x = u; x != v; x = parent(v, x)) path.push_back(x);
  path.push_back(v);
  return path;
}

bool operator==(const MetricTree& a, const MetricTree& b) {
  auto normalized = [](const std::vector<Edge>& edges) {
    std::vector<Edge> out;
    for (auto [x, y] : edges) out.emplace_back(std::min(x, y), std::max(x, y));
    std::sort(out.begin(), out.end());
    return out;
  };
  return a.space() == b.space() && normalized(a.edges()) == normalized(b.edges()) &&
         a.declared_C() == b.declared_C() && a.declared_D() == b.declared_D();
}

Index median(const MetricTree& tree, Index x, Index y, Index z) {
  for (Index m : tree.arc(x, y))
    if (tree.on_arc(m, x, z) && tree.on_arc(m, y, z)) return m;
  throw StructuralError("median: arcs have no common vertex");
}

std::vector<TreeComponent> components_minus(const MetricTree& tree, const IndexSet& removed) {
  const std::size_t n = tree.size();
  std::vector<char> gone(n, 0), seen(n, 0);
  for (Index e : removed) gone[e] = 1;
  std::vector<TreeComponent> out;
  for (Index s = 0; s < n; ++s) {
    if (gone[s] || seen[s]) continue;
    TreeComponent comp;
    std::vector<Index> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      comp.vertices.push_back(x);
      for (Index y : tree.neighbors(x)) {
        if (gone[y]) {
          comp.boundary.push_back(y);
        } else if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    comp.vertices = make_index_set(std::move(comp.vertices));
    comp.boundary = make_index_set(std::move(comp.boundary));
    comp.closure = set_union(comp.vertices, comp.boundary);
    out.push_back(std::move(comp));
  }
  return out;
}

std::optional<Index> Subtree::local(Index parent_vertex) const {
  auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent_vertex);
  if (it == to_parent.end() || *it != parent_vertex) return std::nullopt;
  return static_cast<Index>(it - to_parent.begin());
}

Subtree induced_subtree(const MetricTree& tree, const IndexSet& vertices) {
  Subtree sub;
  sub.to_parent = vertices;
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (Index y : tree.neighbors(vertices[k])) {
      if (y <= vertices[k] || !contains(vertices, y)) continue;
      const Index j = static_cast<Index>(std::lower_bound(vertices.begin(), vertices.end(), y) -
                                         vertices.begin());
      edges.emplace_back(k, j);
    }
  }
  sub.tree = MetricTree(tree.space().subspace(vertices), std::move(edges), tree.declared_C(),
                        tree.declared_D());
  return sub;
}

IndexSet hull(const MetricTree& tree, const IndexSet& marked) {
  if (marked.empty()) throw PreconditionError("hull: empty vertex set");
  std::vector<Index> out;
  for (Index m : marked) {
    const auto path = tree.arc(marked.front(), m);
    out.insert(out.end(), path.begin(), path.end());
  }
  return make_index_set(std::move(out));
}

std::vector<Index> retract_to_arc(const MetricTree& tree, Index u, Index v) {
  if (u == v) throw PreconditionError("retract_to_arc: endpoints must differ");
  std::vector<Index> g(tree.size());
  for (Index x = 0; x < tree.size(); ++x) {
    if (tree.on_arc(x, u, v))
      g[x] = x;
    else if (tree.on_arc(u, x, v))
      g[x] = u;
    else if (tree.on_arc(v, u, x))
      g[x] = v;
    else
      g[x] = median(tree, u, v, x);
  }
  return g;
}

std::vector<double> arc_diameters(const MetricTree& tree) {
  const std::size_t n = tree.size();
  std::vector<double> diam(n * n, 0.0);
  std::vector<Index> order(n);
  for (Index u = 0; u < n; ++u) {
    for (Index v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return tree.hops(u, a) < tree.hops(u, b); });
    for (Index v : order) {
      if (v == u) continue;
      const Index p = tree.parent(u, v);
      double best = diam[u * n + p];
      for (Index w = p;; w = tree.parent(u, w)) {
        best = std::max(best, tree(w, v));
        if (w == u) break;
      }
      diam[u * n + v] = best;
    }
  }
  return diam;
}

MetricTree remetrize_1bt(const MetricTree& tree) {
  FiniteMetricSpace space(tree.space().ids(), arc_diameters(tree), tree.space().basepoint());
  return MetricTree(std::move(space), tree.edges(), 1.0, tree.declared_D());
}

TurningReport bounded_turning(const MetricTree& tree) {
  TurningReport report;
  const std::vector<double> diam = arc_diameters(tree);
  const std::size_t n = tree.size();
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      const double ratio = diam[u * n + v] / tree(u, v);
      if (ratio > report.value) {
        report.value = ratio;
        report.u = u;
        report.v = v;
      }
    }
  }
  return report;
}

double bounded_turning_constant(const MetricTree& tree) { return bounded_turning(tree).value; }

SepPointsReport sep_points(const MetricTree& tree, Index u, Index v, double eps) {
  const IndexSet leaves = tree.leaves();
  const std::vector<Index> path = tree.arc(u, v);
  for (Index x : path) {
    const double to_leaves = tree.space().distance_to(x, leaves);
    if (!(to_leaves > eps)) {
      throw PreconditionError("sep_points: arc vertex " + std::to_string(x) + " lies within " +
                              std::to_string(to_leaves) + " <= eps of a leaf");
    }
  }

  SepPointsReport report;
  report.arc_diameter = tree.space().diameter(path);
  for (Index a : path) {
    if (!tree.is_branch(a)) continue;
    std::optional<SepPair> best;
    for (Index w : tree.neighbors(a)) {
      if (tree.on_arc(w, u, v)) continue;
      for (Index leaf : leaves) {
        if (!tree.on_arc(w, a, leaf)) continue;
        for (Index b : tree.arc(a, leaf)) {
          if (tree(a, b) < eps - kMetricTolerance) continue;
          if (!best || tree(a, b) < best->distance) best = SepPair{a, b, tree(a, b)};
          break;
        }
      }
    }
    if (!best) throw StructuralError("sep_points: branch point without an off-arc leaf");
    report.d_max = std::max(report.d_max, best->distance);
    report.pairs.push_back(*best);
  }

  report.min_pair_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < report.pairs.size(); ++j) {
      const double d = tree(report.pairs[i].b, report.pairs[j].b);
      report.min_pair_distance = std::min(report.min_pair_distance, d);
      report.max_pair_distance = std::max(report.max_pair_distance, d);
    }
  }
  if (report.pairs.size() >= 2) {
    report.bounds_hold =
        report.min_pair_distance >= eps - kMetricTolerance &&
        report.max_pair_distance <= 2.0 * report.d_max + report.arc_diameter + kMetricTolerance;
  }
  return report;
}

double arc_distance_to_chain(const MetricTree& tree, std::span<const Index> chain) {
  if (chain.empty()) return 0.0;
  double worst = 0.0;
  for (Index w : tree.arc(chain.front(), chain.back()))
    worst = std::max(worst, tree.space().distance_to(w, chain));
  return worst;
}

}  // namespace lipquot
