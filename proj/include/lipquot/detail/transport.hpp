#pragma once

// Scalar-generic solvers behind the free-space norms. Both are instantiated
// for double and for exact rationals.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace lipquot::detail {

template <class T>
struct Tolerance {
  static T value() { return T(1e-12); }
};

// Min-cost flow on the complete directed graph with arc costs cost[i][j] and
// unbounded capacities. supply[i] > 0 is a source, < 0 a sink; the supplies
// must sum to zero. Successive shortest paths with Dijkstra on reduced costs;
// each augmentation empties a source, fills a sink or clears a reverse arc.
template <class T>
struct FlowSolution {
  T cost{0};
  std::vector<std::vector<T>> flow;  // flow[i][j] on arc i -> j
};

template <class T>
FlowSolution<T> min_cost_flow(const std::vector<std::vector<T>>& cost, std::vector<T> supply) {
  const std::size_t n = supply.size();
  const T eps = Tolerance<T>::value();
  FlowSolution<T> out;
  out.flow.assign(n, std::vector<T>(n, T(0)));
  std::vector<T> potential(n, T(0));

  for (;;) {
    bool any_source = false;
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > eps) any_source = true;
    if (!any_source) break;

    // Multi-source Dijkstra from every remaining source over the residual
    // graph: forward arcs have unbounded capacity, the reverse arc v -> u
    // exists while flow u -> v is positive.
    std::vector<std::optional<T>> dist(n);
    std::vector<std::size_t> prev(n, n);
    std::vector<char> reverse(n, 0), done(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > eps) dist[i] = T(0);
    std::size_t sink = n;
    for (std::size_t round = 0; round < n; ++round) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v)
        if (!done[v] && dist[v] && (u == n || *dist[v] < *dist[u])) u = v;
      if (u == n) break;
      done[u] = 1;
      if (supply[u] < -eps) {
        sink = u;
        break;
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u || done[v]) continue;
        T reduced = cost[u][v] + potential[u] - potential[v];
        bool via_reverse = false;
        if (out.flow[v][u] > eps) {
          const T back = -cost[v][u] + potential[u] - potential[v];
          if (back < reduced) {
            reduced = back;
            via_reverse = true;
          }
        }
        const T candidate = *dist[u] + reduced;
        if (!dist[v] || candidate < *dist[v]) {
          dist[v] = candidate;
          prev[v] = u;
          reverse[v] = via_reverse;
        }
      }
    }
    if (sink == n) break;  // unbalanced supplies; caller checks

    // Keep reduced costs nonnegative for the next round.
    const T reach = *dist[sink];
    for (std::size_t v = 0; v < n; ++v)
      potential[v] += (done[v] && dist[v]) ? *dist[v] : reach;

    std::size_t source = sink;
    while (prev[source] != n) source = prev[source];
    T amount = supply[source] < -supply[sink] ? supply[source] : -supply[sink];
    for (std::size_t v = sink; prev[v] != n; v = prev[v])
      if (reverse[v] && out.flow[v][prev[v]] < amount) amount = out.flow[v][prev[v]];
    for (std::size_t v = sink; prev[v] != n; v = prev[v]) {
      if (reverse[v]) {
        out.flow[v][prev[v]] -= amount;
      } else {
        out.flow[prev[v]][v] += amount;
      }
    }
    supply[source] -= amount;
    supply[sink] += amount;
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.cost += out.flow[i][j] * cost[i][j];
  return out;
}

// max c.x subject to A x <= b, x >= 0, with b >= 0 so the slack basis is
// feasible. Dense tableau, Bland's rule (no cycling). Returns nullopt when
// unbounded.
template <class T>
struct LpSolution {
  T value{0};
  std::vector<T> x;
};

template <class T>
std::optional<LpSolution<T>> simplex_max(const std::vector<std::vector<T>>& A,
                                         const std::vector<T>& b, const std::vector<T>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const T eps = Tolerance<T>::value();
  const std::size_t width = n + m + 1;
  std::vector<std::vector<T>> tab(m + 1, std::vector<T>(width, T(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = A[i][j];
    tab[i][n + i] = T(1);
    tab[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) tab[m][j] = -c[j];

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (tab[m][j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    T best_ratio{0};
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] > eps) {
        const T ratio = tab[i][width - 1] / tab[i][enter];
        if (leave == m || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == m) return std::nullopt;
    const T pivot = tab[leave][enter];
    for (T& v : tab[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const T factor = tab[i][enter];
      if (factor == T(0)) continue;
      for (std::size_t j = 0; j < width; ++j) tab[i][j] -= factor * tab[leave][j];
    }
    basis[leave] = enter;
  }

  LpSolution<T> out;
  out.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = tab[i][width - 1];
  out.value = tab[m][width - 1];
  return out;
}

}  // namespace lipquot::detail
