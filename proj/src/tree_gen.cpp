#include "lipquot/tree_gen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

#include "lipquot/errors.hpp"

namespace lipquot {

TreeProfile parse_tree_profile(const std::string& name) {
  if (name == "geodesic") return TreeProfile::geodesic;
  if (name == "snowflake") return TreeProfile::snowflake;
  if (name == "comb") return TreeProfile::comb;
  if (name == "vicsek" || name == "vicsek-step") return TreeProfile::vicsek;
  throw InputError("unknown tree profile '" + name + "'");
}

std::string to_string(TreeProfile profile) {
  switch (profile) {
    case TreeProfile::geodesic: return "geodesic";
    case TreeProfile::snowflake: return "snowflake";
    case TreeProfile::comb: return "comb";
    case TreeProfile::vicsek: return "vicsek-step";
  }
  return "geodesic";
}

FiniteMetricSpace path_metric(std::size_t n, const std::vector<Edge>& edges,
                              const std::vector<double>& lengths) {
  std::vector<std::vector<std::pair<Index, double>>> adj(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj[edges[k].first].push_back({edges[k].second, lengths[k]});
    adj[edges[k].second].push_back({edges[k].first, lengths[k]});
  }
  std::vector<double> d(n * n, -1.0);
  for (Index s = 0; s < n; ++s) {
    double* row = d.data() + s * n;
    row[s] = 0.0;
    std::vector<Index> stack{s};
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      for (auto [y, w] : adj[x]) {
        if (row[y] >= 0.0) continue;
        row[y] = row[x] + w;
        stack.push_back(y);
      }
    }
  }
  std::vector<std::string> ids;
  for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return FiniteMetricSpace(std::move(ids), std::move(d));
}

namespace {

MetricTree geodesic_tree(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> length(0.5, 1.5);
  std::bernoulli_distribution extend(0.6);
  std::vector<Edge> edges;
  std::vector<double> lengths;
  for (Index i = 1; i < n; ++i) {
    Index parent = i - 1;
    if (!extend(rng)) parent = std::uniform_int_distribution<Index>(0, i - 1)(rng);
    edges.emplace_back(parent, i);
    lengths.push_back(length(rng));
  }
  return MetricTree(path_metric(n, edges, lengths), edges, 1.0);
}

MetricTree comb_tree(std::size_t n, std::mt19937_64& rng) {
  const std::size_t spine = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n)));
  std::vector<std::size_t> tooth(spine, 0);
  std::vector<std::size_t> order(spine);
  for (std::size_t k = 0; k < spine; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t extra = 0; extra + spine < n; ++extra) ++tooth[order[extra % spine]];

  std::vector<Edge> edges;
  for (Index k = 1; k < spine; ++k) edges.emplace_back(k - 1, k);
  Index next = spine;
  for (Index k = 0; k < spine; ++k) {
    Index prev = k;
    for (std::size_t t = 0; t < tooth[k]; ++t) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
  }
  std::vector<double> lengths(edges.size(), 1.0);
  return MetricTree(path_metric(n, edges, lengths), edges, 1.0);
}

MetricTree vicsek_tree(std::size_t n, std::mt19937_64& rng) {
  using Point = std::array<long long, 2>;
  std::vector<Point> pts{{0, 0}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  long long half = 1;
  while (true) {
    const std::size_t next_count = 5 * pts.size() - 4;
    if (next_count > n) break;
    std::map<Point, Index> index;
    std::vector<Point> grown;
    std::vector<Edge> grown_edges;
    const std::array<Point, 5> offsets{
        Point{0, 0}, Point{2 * half, 2 * half}, Point{2 * half, -2 * half},
        Point{-2 * half, 2 * half}, Point{-2 * half, -2 * half}};
    for (const Point& off : offsets) {
      std::vector<Index> local(pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const Point p{pts[k][0] + off[0], pts[k][1] + off[1]};
        auto [it, fresh] = index.emplace(p, grown.size());
        if (fresh) grown.push_back(p);
        local[k] = it->second;
      }
      for (auto [a, b] : edges) grown_edges.emplace_back(local[a], local[b]);
    }
    pts = std::move(grown);
    edges = std::move(grown_edges);
    half *= 3;
  }
  if (n < pts.size()) throw PreconditionError("vicsek profile needs at least 5 points");

  std::vector<std::array<double, 2>> coords;
  for (const Point& p : pts) coords.push_back({double(p[0]), double(p[1])});
  while (coords.size() < n) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng);
    const auto [a, b] = edges[k];
    const Index m = coords.size();
    coords.push_back({(coords[a][0] + coords[b][0]) / 2.0, (coords[a][1] + coords[b][1]) / 2.0});
    edges[k] = {a, m};
    edges.emplace_back(m, b);
  }
  return MetricTree(FiniteMetricSpace::euclidean(coords), edges);
}

}  // namespace

MetricTree gen_tree(std::size_t n, std::uint64_t seed, const TreeGenOptions& options) {
  if (n < 2) throw PreconditionError("gen_tree: need at least two vertices");
  std::mt19937_64 rng(seed);
  switch (options.profile) {
    case TreeProfile::geodesic:
      return geodesic_tree(n, rng);
    case TreeProfile::snowflake: {
      if (!(options.snowflake_s > 0.0) || options.snowflake_s > 1.0)
        throw PreconditionError("gen_tree: snowflake exponent must lie in (0,1]");
      MetricTree base = geodesic_tree(n, rng);
      return MetricTree(base.space().snowflaked(options.snowflake_s), base.edges(), 1.0);
    }
    case TreeProfile::comb:
      return comb_tree(n, rng);
    case TreeProfile::vicsek:
      return vicsek_tree(n, rng);
  }
  throw InputError("gen_tree: unknown profile");
}

}  // namespace lipquot
