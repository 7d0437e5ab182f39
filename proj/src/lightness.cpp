#include "lipquot/lightness.hpp"

#include <algorithm>
#include <bit>
#include <tuple>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "lipquot/detail/union_find.hpp"
#include "lipquot/errors.hpp"

namespace lipquot {

LipschitzReport measure_lipschitz(const FiniteMetricSpace& space, std::span<const double> values) {
  if (values.size() != space.size()) throw InputError("measure_lipschitz: size mismatch");
  LipschitzReport report;
  for (Index a = 0; a < space.size(); ++a) {
    for (Index b = a + 1; b < space.size(); ++b) {
      const double ratio = std::abs(values[a] - values[b]) / space(a, b);
      if (ratio > report.value) {
        report.value = ratio;
        report.a = a;
        report.b = b;
      }
    }
  }
  return report;
}

std::vector<double> fold(std::span<const double> values, double c) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = c - std::abs(values[i] - c);
  return out;
}

namespace {

// Union-find over points that also tracks each component's diameter.
class DiameterForest {
 public:
  explicit DiameterForest(const FiniteMetricSpace& space)
      : space_(space), uf_(space.size()), members_(space.size()), diam_(space.size(), 0.0),
        pair_(space.size()) {
    for (Index i = 0; i < space.size(); ++i) {
      members_[i] = {i};
      pair_[i] = {i, i};
    }
  }

  // Returns the root of the merged component.
  Index unite(Index a, Index b) {
    Index ra = uf_.find(a), rb = uf_.find(b);
    if (ra == rb) return ra;
    if (members_[ra].size() < members_[rb].size()) std::swap(ra, rb);
    double best = diam_[ra];
    std::pair<Index, Index> best_pair = pair_[ra];
    if (diam_[rb] > best) {
      best = diam_[rb];
      best_pair = pair_[rb];
    }
    for (Index x : members_[ra]) {
      for (Index y : members_[rb]) {
        if (space_(x, y) > best) {
          best = space_(x, y);
          best_pair = {x, y};
        }
      }
    }
    const Index root = uf_.unite(ra, rb);
    const Index other = root == ra ? rb : ra;
    members_[root].insert(members_[root].end(), members_[other].begin(), members_[other].end());
    members_[other].clear();
    diam_[root] = best;
    pair_[root] = best_pair;
    return root;
  }

  double diameter(Index root) const { return diam_[root]; }
  std::pair<Index, Index> diameter_pair(Index root) const { return pair_[root]; }
  const std::vector<Index>& members(Index root) const { return members_[root]; }

 private:
  const FiniteMetricSpace& space_;
  detail::UnionFind uf_;
  std::vector<std::vector<Index>> members_;
  std::vector<double> diam_;
  std::vector<std::pair<Index, Index>> pair_;
};

struct WeightedPair {
  double d;
  Index a, b;
};

std::vector<WeightedPair> sorted_pairs(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<WeightedPair> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) edges.push_back({space(a, b), a, b});
  std::sort(edges.begin(), edges.end(),
            [](const WeightedPair& x, const WeightedPair& y) { return x.d < y.d; });
  return edges;
}

struct SweepBest {
  double ratio = 0.0;
  double radius = 0.0;
  double diameter = 0.0;
  Index a = 0, b = 0;
  IndexSet component;
  bool improved = false;
};

// Grows a set of points (point x joins at time activation[x]) together with
// the threshold graph d <= r, and records the largest
// (component diameter)/r seen. `order` lists the points that ever join,
// sorted by activation time.
void sweep(const FiniteMetricSpace& space, const std::vector<WeightedPair>& edges,
           const std::vector<double>& activation, const std::vector<Index>& order,
           double total_diameter, SweepBest& best) {
  const std::size_t n = space.size();
  DiameterForest forest(space);
  std::vector<char> active(n, 0);
  std::vector<Index> active_list;
  best.improved = false;
  if (order.empty()) return;
  double current = 0.0;
  Index current_root = order.front();

  std::size_t ia = 0, ie = 0;
  while (ia < order.size() || ie < edges.size()) {
    const double t_act =
        ia < order.size() ? activation[order[ia]] : std::numeric_limits<double>::infinity();
    const double t_edge =
        ie < edges.size() ? edges[ie].d : std::numeric_limits<double>::infinity();
    const double t = std::min(t_act, t_edge);
    if (t > 0.0 && total_diameter / t <= best.ratio) break;

    auto absorb = [&](Index root) {
      if (forest.diameter(root) > current) {
        current = forest.diameter(root);
        current_root = root;
      }
    };
    while (ia < order.size() && activation[order[ia]] == t) {
      const Index x = order[ia++];
      active[x] = 1;
      for (Index y : active_list)
        if (space(x, y) <= t) absorb(forest.unite(x, y));
      active_list.push_back(x);
    }
    while (ie < edges.size() && edges[ie].d == t) {
      const WeightedPair& e = edges[ie++];
      if (active[e.a] && active[e.b]) absorb(forest.unite(e.a, e.b));
    }
    if (t > 0.0 && current / t > best.ratio) {
      best.ratio = current / t;
      best.radius = t;
      best.diameter = current;
      std::tie(best.a, best.b) = forest.diameter_pair(current_root);
      best.component = make_index_set(forest.members(current_root));
      best.improved = true;
    }
  }
}

}  // namespace

LightnessReport measure_lightness(const FiniteMetricSpace& space, std::span<const double> values) {
  const std::size_t n = space.size();
  if (values.size() != n) throw InputError("measure_lightness: size mismatch");
  LightnessReport report;
  report.lipschitz = measure_lipschitz(space, values).value;
  if (n < 2) return report;

  const std::vector<WeightedPair> edges = sorted_pairs(space);
  std::vector<Index> by_value(n);
  std::iota(by_value.begin(), by_value.end(), Index{0});
  std::stable_sort(by_value.begin(), by_value.end(),
                   [&](Index a, Index b) { return values[a] < values[b]; });
  const double total_diameter = space.diameter();

  SweepBest best;
  std::vector<double> activation(n);
  for (std::size_t start = 0; start < n; ++start) {
    if (start > 0 && values[by_value[start]] == values[by_value[start - 1]]) continue;
    const double low = values[by_value[start]];
    for (Index x = 0; x < n; ++x) activation[x] = values[x] - low;
    const std::vector<Index> order(by_value.begin() + static_cast<std::ptrdiff_t>(start),
                                   by_value.end());
    sweep(space, edges, activation, order, total_diameter, best);
    if (best.improved) report.witness.window_low = low;
  }
  report.lightness = best.ratio;
  report.witness.radius = best.radius;
  report.witness.diameter = best.diameter;
  report.witness.a = best.a;
  report.witness.b = best.b;
  report.witness.component = best.component;
  return report;
}

namespace {

using Mask = std::uint64_t;

void maximal_cliques(const std::vector<Mask>& adj, Mask r, Mask p, Mask x,
                     std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  const Mask px = p | x;
  int pivot = std::countr_zero(px);
  int best = -1;
  for (Mask scan = px; scan; scan &= scan - 1) {
    const int u = std::countr_zero(scan);
    const int c = std::popcount(p & adj[u]);
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  for (Mask cand = p & ~adj[pivot]; cand; cand &= cand - 1) {
    const int v = std::countr_zero(cand);
    const Mask bit = Mask{1} << v;
    maximal_cliques(adj, r | bit, p & adj[v], x & adj[v], out);
    p &= ~bit;
    x |= bit;
  }
}

// Largest r-component diameter among the points flagged in `take`.
double max_component_diameter(const FiniteMetricSpace& space, const std::vector<Index>& take,
                              double r, IndexSet* component) {
  const std::size_t m = take.size();
  detail::UnionFind uf(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (space(take[a], take[b]) <= r) uf.unite(a, b);
  std::vector<double> diam(m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (uf.find(a) == uf.find(b))
        diam[uf.find(a)] = std::max(diam[uf.find(a)], space(take[a], take[b]));
  std::size_t best = 0;
  for (std::size_t a = 0; a < m; ++a)
    if (diam[a] > diam[best]) best = a;
  if (component && m > 0) {
    component->clear();
    for (std::size_t a = 0; a < m; ++a)
      if (uf.find(a) == uf.find(best)) component->push_back(take[a]);
  }
  return m == 0 ? 0.0 : diam[best];
}

std::vector<double> positive_distances(const FiniteMetricSpace& space, double scale = 1.0) {
  std::vector<double> out;
  for (Index a = 0; a < space.size(); ++a)
    for (Index b = a + 1; b < space.size(); ++b)
      if (space(a, b) > 0.0) out.push_back(scale * space(a, b));
  return out;
}

}  // namespace

MetricLightnessReport measure_metric_lightness(const FiniteMetricSpace& domain,
                                               const FiniteMetricSpace& target,
                                               std::span<const Index> image,
                                               std::size_t exact_limit) {
  if (image.size() != domain.size()) throw InputError("measure_metric_lightness: size mismatch");
  MetricLightnessReport report;
  if (domain.size() < 2) return report;

  IndexSet used = make_index_set(std::vector<Index>(image.begin(), image.end()));
  const FiniteMetricSpace image_space = target.subspace(used);
  std::vector<Index> slot(domain.size());
  for (Index x = 0; x < domain.size(); ++x)
    slot[x] = static_cast<Index>(std::lower_bound(used.begin(), used.end(), image[x]) -
                                 used.begin());
  const std::size_t m = used.size();
  const double total = domain.diameter();
  auto fits = [](double d, double r) { return d <= r + 1e-12 * std::max(1.0, r); };

  std::vector<double> radii = positive_distances(domain);
  const std::vector<double> target_radii = positive_distances(image_space);
  radii.insert(radii.end(), target_radii.begin(), target_radii.end());

  if (m <= std::min<std::size_t>(exact_limit, 64)) {
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::vector<Mask> adj(m), cliques;
    std::vector<Index> take;
    IndexSet component;
    for (double r : radii) {
      if (total / r <= report.lightness) break;
      for (Index a = 0; a < m; ++a) {
        adj[a] = 0;
        for (Index b = 0; b < m; ++b)
          if (a != b && fits(image_space(a, b), r)) adj[a] |= Mask{1} << b;
      }
      cliques.clear();
      const Mask all = m == 64 ? ~Mask{0} : (Mask{1} << m) - 1;
      maximal_cliques(adj, 0, all, 0, cliques);
      for (Mask k : cliques) {
        take.clear();
        for (Index x = 0; x < domain.size(); ++x)
          if (k >> slot[x] & 1) take.push_back(x);
        const double diam = max_component_diameter(domain, take, r, &component);
        if (diam / r > report.lightness) {
          report.lightness = diam / r;
          report.radius = r;
          report.component = component;
        }
      }
    }
    report.exact = true;
    report.lower = report.upper = report.lightness;
    return report;
  }

  const std::vector<WeightedPair> edges = sorted_pairs(domain);
  auto ball_sweep = [&](double ball_factor, SweepBest& best) {
    std::vector<double> activation(domain.size());
    std::vector<Index> order(domain.size());
    for (Index e = 0; e < m; ++e) {
      for (Index x = 0; x < domain.size(); ++x)
        activation[x] = image_space(e, slot[x]) / ball_factor;
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](Index a, Index b) { return activation[a] < activation[b]; });
      sweep(domain, edges, activation, order, total, best);
    }
    return best.ratio;
  };
  SweepBest lower, upper;
  report.lower = ball_sweep(0.5, lower);
  report.upper = ball_sweep(1.0, upper);
  report.component = upper.component;
  report.radius = upper.radius;
  report.lightness = report.upper;
  report.exact = false;
  return report;
}

}  // namespace lipquot
