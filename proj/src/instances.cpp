#include "lipquot/instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "lipquot/errors.hpp"

namespace lipquot {

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

FiniteMetricSpace random_planar_space(Rng& rng, std::size_t n, double side) {
  std::vector<std::array<double, 2>> points(n);
  for (auto& p : points) p = {uniform_real(rng, 0.0, side), uniform_real(rng, 0.0, side)};
  return FiniteMetricSpace::euclidean(points);
}

FiniteMetricSpace random_integer_space(Rng& rng, std::size_t n, int grid) {
  if (n > static_cast<std::size_t>(grid * grid))
    throw PreconditionError("random_integer_space: grid too small");
  std::set<std::pair<int, int>> used;
  std::vector<std::pair<int, int>> points;
  std::uniform_int_distribution<int> coord(0, grid - 1);
  while (points.size() < n) {
    const std::pair<int, int> p{coord(rng), coord(rng)};
    if (used.insert(p).second) points.push_back(p);
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = std::abs(points[i].first - points[j].first) +
                std::abs(points[i].second - points[j].second);
  return FiniteMetricSpace(d);
}

IndexSet random_subset(Rng& rng, std::size_t n, double p) {
  IndexSet out;
  std::bernoulli_distribution keep(p);
  for (Index i = 0; i < n; ++i)
    if (keep(rng)) out.push_back(i);
  if (out.empty()) out.push_back(uniform_size(rng, 0, n - 1));
  return out;
}

MetricTree random_tree(Rng& rng, std::size_t n, TreeProfile profile) {
  TreeGenOptions options;
  options.profile = profile;
  if (profile == TreeProfile::snowflake) options.snowflake_s = uniform_real(rng, 0.5, 0.9);
  MetricTree tree = gen_tree(n, rng(), options);
  if (bounded_turning_constant(tree) > 1.0 + 1e-9) tree = remetrize_1bt(tree);
  return tree;
}

FreeVector random_free_vector(Rng& rng, std::size_t n, bool integral) {
  std::vector<Index> support;
  std::vector<double> coeffs;
  std::bernoulli_distribution keep(0.6);
  std::uniform_int_distribution<int> small(-3, 3);
  for (Index i = 0; i < n; ++i) {
    if (!keep(rng)) continue;
    const double c = integral ? small(rng) : uniform_real(rng, -1.0, 1.0);
    if (c == 0.0) continue;
    support.push_back(i);
    coeffs.push_back(c);
  }
  if (support.empty()) {
    support.push_back(uniform_size(rng, 0, n - 1));
    coeffs.push_back(1.0);
  }
  return make_free_vector(std::move(support), std::move(coeffs), n);
}

std::vector<double> cantor_points(Rng& rng, std::size_t levels, double alpha) {
  if (levels == 0) throw PreconditionError("cantor_points: need at least one level");
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("cantor_points: alpha in (0,1)");
  std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
  const double most = (1.0 - alpha) / 2.0;
  for (std::size_t level = 1; level < levels; ++level) {
    std::vector<std::pair<double, double>> next;
    for (const auto& [lo, hi] : intervals) {
      const double len = hi - lo;
      const double left = len * uniform_real(rng, 0.3 * most, 0.9 * most);
      const double right = len * uniform_real(rng, 0.3 * most, 0.9 * most);
      next.emplace_back(lo, lo + left);
      next.emplace_back(hi - right, hi);
    }
    intervals = std::move(next);
  }
  std::vector<double> points;
  for (const auto& [lo, hi] : intervals) {
    points.push_back(lo);
    points.push_back(hi);
  }
  return points;
}

DisconnectedInstance disconnected_instance(Rng& rng, double alpha, std::size_t levels,
                                           std::size_t extra) {
  const std::vector<double> xs = cantor_points(rng, levels, alpha);
  std::vector<std::array<double, 2>> points;
  DisconnectedInstance out;
  out.alpha = alpha;
  for (double x : xs) {
    out.collapsed.push_back(points.size());
    points.push_back({x, 0.0});
  }
  for (std::size_t k = 0; k < extra; ++k)
    points.push_back({uniform_real(rng, -0.5, 1.5), uniform_real(rng, -0.75, 0.75)});
  out.space = FiniteMetricSpace::euclidean(points);
  return out;
}

ChainLiftInstance chain_lift_instance(Rng& rng, double alpha) {
  for (;;) {
    const std::size_t n_source = uniform_size(rng, 25, 45);
    const std::size_t n_collapsed = uniform_size(rng, 1, 4);
    std::vector<std::array<double, 2>> points;
    // B lies in a thin strip so that fine chains exist at every scale.
    for (std::size_t k = 0; k < n_source; ++k)
      points.push_back({uniform_real(rng, 0.0, 1.0), uniform_real(rng, 0.0, 0.05)});
    for (std::size_t k = 0; k < n_collapsed; ++k)
      points.push_back({uniform_real(rng, -1.0, 2.0), uniform_real(rng, 0.1, 1.5)});
    ChainLiftInstance out;
    out.alpha = alpha;
    out.space = FiniteMetricSpace::euclidean(points);
    out.source = all_indices(n_source);
    for (std::size_t k = 0; k < n_collapsed; ++k) out.collapsed.push_back(n_source + k);
    out.quotient = quotient(out.space, out.collapsed);
    const IndexSet allowed = out.quotient.classes(set_union(out.source, out.collapsed));
    for (int attempt = 0; attempt < 40; ++attempt) {
      const Index x = out.quotient.class_of[uniform_size(rng, 0, n_source - 1)];
      const Index y = out.quotient.class_of[uniform_size(rng, 0, n_source - 1)];
      if (x == y) continue;
      auto chain = find_relative_alpha_chain(out.quotient.space, x, y, alpha, allowed);
      if (chain && is_nondegenerate_relative_chain(out.quotient.space, chain->indices, alpha)) {
        out.chain = std::move(*chain);
        return out;
      }
    }
  }
}

std::vector<FiniteMetricSpace> random_pieces(Rng& rng, std::size_t count, std::size_t max_size,
                                             bool integral) {
  std::vector<FiniteMetricSpace> pieces;
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t n = uniform_size(rng, 2, std::max<std::size_t>(2, max_size));
    FiniteMetricSpace s = integral ? random_integer_space(rng, n) : random_planar_space(rng, n);
    pieces.push_back(s.with_basepoint(0));
  }
  return pieces;
}

UnionInstance random_segment_union(Rng& rng, std::size_t segments, std::size_t per_segment) {
  if (segments == 0 || per_segment < 2)
    throw PreconditionError("random_segment_union: need segments with two points");
  std::vector<std::array<double, 2>> points;
  UnionInstance out;
  for (std::size_t s = 0; s < segments; ++s) {
    std::vector<Index> path;
    std::array<double, 2> start;
    if (s == 0 || uniform_real(rng, 0.0, 1.0) < 0.2) {
      start = {uniform_real(rng, -4.0, 4.0), uniform_real(rng, -4.0, 4.0)};
      path.push_back(points.size());
      points.push_back(start);
    } else {
      const Index anchor = uniform_size(rng, 0, points.size() - 1);
      start = points[anchor];
      path.push_back(anchor);
    }
    const double angle = uniform_real(rng, 0.0, 6.283185307179586);
    const double length = uniform_real(rng, 0.5, 2.0);
    for (std::size_t k = 1; k < per_segment; ++k) {
      const double t = length * static_cast<double>(k) / static_cast<double>(per_segment - 1);
      path.push_back(points.size());
      points.push_back({start[0] + t * std::cos(angle), start[1] + t * std::sin(angle)});
    }
    out.paths.push_back(std::move(path));
  }
  out.ambient = FiniteMetricSpace::euclidean(points);
  return out;
}

}  // namespace lipquot
