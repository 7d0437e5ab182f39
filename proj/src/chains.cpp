#include "lipquot/chains.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>

#include "lipquot/detail/union_find.hpp"
#include "lipquot/errors.hpp"

namespace lipquot {

bool is_delta_chain(const FiniteMetricSpace& space, std::span<const Index> chain, double delta,
                    double tolerance) {
  if (chain.empty()) return false;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (space(chain[i], chain[i + 1]) > delta + tolerance) return false;
  return true;
}

bool is_relative_alpha_chain(const FiniteMetricSpace& space, std::span<const Index> chain,
                             double alpha, double tolerance) {
  if (chain.empty()) return false;
  return is_delta_chain(space, chain, alpha * space(chain.front(), chain.back()), tolerance);
}

bool is_nondegenerate_relative_chain(const FiniteMetricSpace& space, std::span<const Index> chain,
                                     double alpha, double tolerance) {
  if (chain.size() < 2 || chain.front() == chain.back()) return false;
  if (space(chain.front(), chain.back()) <= 0.0) return false;
  return is_relative_alpha_chain(space, chain, alpha, tolerance);
}

std::vector<IndexSet> delta_components(const FiniteMetricSpace& space, const IndexSet& subset,
                                       double delta) {
  if (!(delta > 0.0)) throw PreconditionError("delta_components: delta must be positive");
  const std::size_t m = subset.size();
  detail::UnionFind uf(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (space(subset[a], subset[b]) <= delta + kMetricTolerance) uf.unite(a, b);

  std::map<std::size_t, IndexSet> by_root;
  for (std::size_t a = 0; a < m; ++a) by_root[uf.find(a)].push_back(subset[a]);
  std::vector<IndexSet> out;
  out.reserve(by_root.size());
  for (auto& [root, members] : by_root) out.push_back(make_index_set(std::move(members)));
  std::sort(out.begin(), out.end(),
            [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
  return out;
}

std::optional<Chain> find_relative_alpha_chain(const FiniteMetricSpace& space, Index x, Index y,
                                               double alpha, const IndexSet& subset) {
  if (x == y) throw PreconditionError("find_relative_alpha_chain: endpoints must be distinct");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw PreconditionError("find_relative_alpha_chain: alpha must lie in (0,1]");
  IndexSet pool = subset.empty() ? all_indices(space.size()) : subset;
  if (!contains(pool, x) || !contains(pool, y))
    throw PreconditionError("find_relative_alpha_chain: endpoints must lie in the subset");

  const double step = alpha * space(x, y) + kMetricTolerance;
  std::vector<Index> parent(space.size(), space.size());
  std::queue<Index> frontier;
  parent[x] = x;
  frontier.push(x);
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    if (u == y) break;
    for (Index v : pool) {
      if (parent[v] != space.size() || space(u, v) > step) continue;
      parent[v] = u;
      frontier.push(v);
    }
  }
  if (parent[y] == space.size()) return std::nullopt;

  Chain chain;
  chain.scale = alpha;
  for (Index v = y; v != x; v = parent[v]) chain.indices.push_back(v);
  chain.indices.push_back(x);
  std::reverse(chain.indices.begin(), chain.indices.end());
  return chain;
}

DisconnectednessReport uniform_disconnectedness(const FiniteMetricSpace& space,
                                                const IndexSet& subset) {
  DisconnectednessReport report;
  const std::size_t m = subset.size();
  if (m < 2) return report;

  // Prim's minimum spanning tree; minimax paths run along it.
  std::vector<std::vector<std::pair<std::size_t, double>>> mst(m);
  std::vector<double> key(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> link(m, m);
  std::vector<char> done(m, 0);
  key[0] = 0.0;
  for (std::size_t it = 0; it < m; ++it) {
    std::size_t u = m;
    for (std::size_t a = 0; a < m; ++a)
      if (!done[a] && (u == m || key[a] < key[u])) u = a;
    done[u] = 1;
    if (link[u] != m) {
      mst[u].push_back({link[u], key[u]});
      mst[link[u]].push_back({u, key[u]});
    }
    for (std::size_t a = 0; a < m; ++a) {
      const double d = space(subset[u], subset[a]);
      if (!done[a] && d < key[a]) {
        key[a] = d;
        link[a] = u;
      }
    }
  }

  report.value = std::numeric_limits<double>::infinity();
  std::vector<double> worst(m);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < m; ++s) {
    std::fill(worst.begin(), worst.end(), -1.0);
    worst[s] = 0.0;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (auto [v, w] : mst[u]) {
        if (worst[v] >= 0.0) continue;
        worst[v] = std::max(worst[u], w);
        stack.push_back(v);
      }
    }
    for (std::size_t t = s + 1; t < m; ++t) {
      const double d = space(subset[s], subset[t]);
      const double ratio = worst[t] / d;
      if (ratio < report.value) {
        report.value = ratio;
        report.x = subset[s];
        report.y = subset[t];
        report.bottleneck = worst[t];
      }
    }
  }
  return report;
}

double uniform_disconnectedness_constant(const FiniteMetricSpace& space, const IndexSet& subset) {
  return uniform_disconnectedness(space, subset).value;
}

}  // namespace lipquot
