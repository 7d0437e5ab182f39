#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace oracle {

std::vector<std::vector<Index>> threshold_components(const FiniteMetricSpace& space,
                                                     const std::vector<Index>& points, double r) {
  std::vector<bool> seen(points.size(), false);
  std::vector<std::vector<Index>> out;
  for (std::size_t s = 0; s < points.size(); ++s) {
    if (seen[s]) continue;
    std::vector<Index> comp;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      comp.push_back(points[k]);
      for (std::size_t j = 0; j < points.size(); ++j)
        if (!seen[j] && space(points[k], points[j]) <= r) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

double worst_ratio(const FiniteMetricSpace& space, const std::vector<double>& values, double r,
                   double low) {
  std::vector<Index> inside;
  for (Index x = 0; x < values.size(); ++x)
    if (values[x] >= low && values[x] - low <= r) inside.push_back(x);
  double best = 0.0;
  for (const auto& comp : threshold_components(space, inside, r)) {
    double diam = 0.0;
    for (Index a : comp)
      for (Index b : comp) diam = std::max(diam, space(a, b));
    best = std::max(best, diam / r);
  }
  return best;
}

}  // namespace

GridLightness grid_lightness(const FiniteMetricSpace& space, const std::vector<double>& values,
                             std::size_t steps) {
  const std::size_t n = values.size();
  GridLightness out;
  std::set<double> critical;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      critical.insert(space(a, b));
      critical.insert(std::abs(values[a] - values[b]));
    }
  critical.erase(0.0);
  for (double r : critical)
    for (double low : values) out.at_critical = std::max(out.at_critical, worst_ratio(space, values, r, low));

  const double vmin = *std::min_element(values.begin(), values.end());
  const double vmax = *std::max_element(values.begin(), values.end());
  double rmax = std::max(vmax - vmin, 0.0);
  for (double r : critical) rmax = std::max(rmax, r);
  if (rmax == 0.0) return out;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double r = rmax * static_cast<double>(i) / static_cast<double>(steps);
    for (std::size_t j = 0; j <= steps; ++j) {
      const double low = vmin - r + (vmax - vmin + r) * static_cast<double>(j) / static_cast<double>(steps);
      out.on_grid = std::max(out.on_grid, worst_ratio(space, values, r, low));
    }
  }
  return out;
}

double lipschitz(const FiniteMetricSpace& space, const std::vector<double>& values) {
  double best = 0.0;
  for (Index a = 0; a < values.size(); ++a)
    for (Index b = a + 1; b < values.size(); ++b)
      if (space(a, b) > 0.0) best = std::max(best, std::abs(values[a] - values[b]) / space(a, b));
  return best;
}

namespace {

// reach[i][j]: j reachable from i inside `allowed` with steps <= step.
std::vector<std::vector<bool>> closure(const FiniteMetricSpace& space,
                                       const std::vector<Index>& allowed, double step) {
  const std::size_t m = allowed.size();
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) reach[i][j] = i == j || space(allowed[i], allowed[j]) <= step;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < m; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

}  // namespace

bool chain_exists(const FiniteMetricSpace& space, const std::vector<Index>& allowed, Index x,
                  Index y, double step) {
  const auto ix = std::find(allowed.begin(), allowed.end(), x) - allowed.begin();
  const auto iy = std::find(allowed.begin(), allowed.end(), y) - allowed.begin();
  if (ix == static_cast<std::ptrdiff_t>(allowed.size()) || iy == static_cast<std::ptrdiff_t>(allowed.size()))
    return false;
  return closure(space, allowed, step)[ix][iy];
}

double min_relative_alpha(const FiniteMetricSpace& space, const std::vector<Index>& allowed) {
  std::set<double> steps;
  for (Index a : allowed)
    for (Index b : allowed)
      if (space(a, b) > 0.0) steps.insert(space(a, b));
  double best = std::numeric_limits<double>::infinity();
  for (double step : steps) {
    const auto reach = closure(space, allowed, step);
    for (std::size_t i = 0; i < allowed.size(); ++i)
      for (std::size_t j = 0; j < allowed.size(); ++j) {
        const double d = space(allowed[i], allowed[j]);
        if (d > 0.0 && reach[i][j]) best = std::min(best, step / d);
      }
  }
  return best;
}

std::vector<Index> bfs_path(const MetricTree& tree, Index u, Index v) {
  const std::size_t n = tree.size();
  std::vector<std::vector<Index>> adj(n);
  for (const auto& [a, b] : tree.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<Index> from(n, n);
  std::queue<Index> q;
  q.push(u);
  from[u] = u;
  while (!q.empty()) {
    const Index x = q.front();
    q.pop();
    for (Index y : adj[x])
      if (from[y] == n) {
        from[y] = x;
        q.push(y);
      }
  }
  std::vector<Index> path{v};
  while (path.back() != u) path.push_back(from[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

Index brute_median(const MetricTree& tree, Index x, Index y, Index z) {
  const auto xy = bfs_path(tree, x, y);
  const auto yz = bfs_path(tree, y, z);
  const auto xz = bfs_path(tree, x, z);
  for (Index m : xy)
    if (std::count(yz.begin(), yz.end(), m) && std::count(xz.begin(), xz.end(), m)) return m;
  return tree.size();
}

namespace {

// Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<std::vector<double>> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-12) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) b[c] /= a[c][c];
  return b;
}

}  // namespace

double lip_dual_by_vertices(const FiniteMetricSpace& space, Index base,
                            const std::vector<double>& mu) {
  const std::size_t n = space.size();
  std::vector<Index> vars;
  for (Index i = 0; i < n; ++i)
    if (i != base) vars.push_back(i);
  const std::size_t m = vars.size();
  if (m == 0) return 0.0;
  // Rows: f(i) - f(j) <= d(i,j) for ordered pairs, f(base) = 0 substituted.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<double> row(m, 0.0);
      for (std::size_t k = 0; k < m; ++k) {
        if (vars[k] == i) row[k] += 1.0;
        if (vars[k] == j) row[k] -= 1.0;
      }
      rows.push_back(std::move(row));
      rhs.push_back(space(i, j));
    }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(m);
  for (std::size_t k = 0; k < m; ++k) pick[k] = k;
  const std::size_t total = rows.size();
  for (;;) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t k : pick) {
      a.push_back(rows[k]);
      b.push_back(rhs[k]);
    }
    if (const auto f = solve(a, b)) {
      bool feasible = true;
      for (std::size_t r = 0; r < total && feasible; ++r) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < m; ++k) lhs += rows[r][k] * (*f)[k];
        feasible = lhs <= rhs[r] + 1e-9;
      }
      if (feasible) {
        double value = 0.0;
        for (std::size_t k = 0; k < m; ++k) value += mu[vars[k]] * (*f)[k];
        best = std::max(best, value);
      }
    }
    // Next combination of m rows out of total.
    std::size_t k = m;
    while (k > 0 && pick[k - 1] == total - m + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

std::size_t exhaustive_doubling(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::size_t worst = 1;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const double r = space(x, y);
      std::vector<Index> ball;
      for (Index z = 0; z < n; ++z)
        if (space(x, z) <= r) ball.push_back(z);
      // Least k such that some k centres cover the ball.
      std::size_t k = 1;
      for (;; ++k) {
        bool found = false;
        std::vector<bool> mask(n, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
          bool covered = true;
          for (Index z : ball) {
            bool hit = false;
            for (Index c = 0; c < n && !hit; ++c) hit = mask[c] && space(c, z) <= r / 2.0;
            if (!hit) {
              covered = false;
              break;
            }
          }
          if (covered) found = true;
        } while (!found && std::prev_permutation(mask.begin(), mask.end()));
        if (found) break;
      }
      worst = std::max(worst, k);
    }
  return worst;
}

double quotient_distance(const FiniteMetricSpace& space, const IndexSet& collapsed, Index a,
                         Index b) {
  auto to_set = [&](Index x) {
    double best = std::numeric_limits<double>::infinity();
    for (Index e : collapsed) best = std::min(best, space(x, e));
    return best;
  };
  return std::min(space(a, b), to_set(a) + to_set(b));
}

}  // namespace oracle
