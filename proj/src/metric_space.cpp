#include "lipquot/metric_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "lipquot/errors.hpp"

namespace lipquot {

IndexSet make_index_set(std::vector<Index> raw) {
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  return raw;
}

bool contains(const IndexSet& set, Index i) {
  return std::binary_search(set.begin(), set.end(), i);
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet all_indices(std::size_t n) {
  IndexSet out(n);
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

namespace {

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> ids, std::vector<double> row_major,
                                     std::optional<Index> basepoint)
    : n_(ids.size()), ids_(std::move(ids)), dist_(std::move(row_major)), basepoint_(basepoint) {
  if (dist_.size() != n_ * n_) {
    throw InputError("distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                     std::to_string(n_ * n_) + " for " + std::to_string(n_) + " points");
  }
  if (basepoint_ && *basepoint_ >= n_) {
    throw InputError("basepoint " + std::to_string(*basepoint_) + " out of range");
  }
}

FiniteMetricSpace::FiniteMetricSpace(const std::vector<std::vector<double>>& matrix,
                                     std::optional<Index> basepoint)
    : n_(matrix.size()), ids_(default_ids(matrix.size())), basepoint_(basepoint) {
  dist_.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (matrix[i].size() != n_) {
      throw InputError("row " + std::to_string(i) + " has " + std::to_string(matrix[i].size()) +
                       " entries, expected " + std::to_string(n_));
    }
    dist_.insert(dist_.end(), matrix[i].begin(), matrix[i].end());
  }
  if (basepoint_ && *basepoint_ >= n_) {
    throw InputError("basepoint " + std::to_string(*basepoint_) + " out of range");
  }
}

FiniteMetricSpace FiniteMetricSpace::euclidean(std::span<const std::array<double, 2>> points) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return FiniteMetricSpace(default_ids(n), std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::on_line(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(xs[i] - xs[j]);
  return FiniteMetricSpace(default_ids(n), std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::with_basepoint(std::optional<Index> basepoint) const {
  FiniteMetricSpace out = *this;
  if (basepoint && *basepoint >= n_) throw InputError("basepoint out of range");
  out.basepoint_ = basepoint;
  return out;
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const Index> subset) const {
  const std::size_t m = subset.size();
  std::vector<std::string> ids;
  ids.reserve(m);
  std::vector<double> d(m * m);
  std::optional<Index> base;
  for (std::size_t a = 0; a < m; ++a) {
    if (subset[a] >= n_) throw InputError("subspace index out of range");
    ids.push_back(ids_[subset[a]]);
    if (basepoint_ && subset[a] == *basepoint_) base = a;
    for (std::size_t b = 0; b < m; ++b) d[a * m + b] = (*this)(subset[a], subset[b]);
  }
  return FiniteMetricSpace(std::move(ids), std::move(d), base);
}

FiniteMetricSpace FiniteMetricSpace::scaled(double factor) const {
  FiniteMetricSpace out = *this;
  for (double& v : out.dist_) v *= factor;
  return out;
}

FiniteMetricSpace FiniteMetricSpace::snowflaked(double s) const {
  FiniteMetricSpace out = *this;
  for (double& v : out.dist_) v = std::pow(v, s);
  return out;
}

double FiniteMetricSpace::distance_to(Index x, std::span<const Index> set) const {
  double best = std::numeric_limits<double>::infinity();
  for (Index e : set) best = std::min(best, (*this)(x, e));
  return best;
}

double FiniteMetricSpace::diameter() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

double FiniteMetricSpace::diameter(std::span<const Index> subset) const {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      best = std::max(best, (*this)(subset[a], subset[b]));
  return best;
}

bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  return a.ids() == b.ids() && a.matrix() == b.matrix() && a.basepoint() == b.basepoint();
}

ValidationReport validate_metric(const FiniteMetricSpace& space, double tolerance) {
  ValidationReport report;
  const std::size_t n = space.size();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(space(i, i)) > tolerance || !std::isfinite(space(i, i)))
      report.diagonal.push_back({i, space(i, i)});
    for (Index j = i + 1; j < n; ++j) {
      const double f = space(i, j);
      const double b = space(j, i);
      if (!(std::abs(f - b) <= tolerance)) report.symmetry.push_back({i, j, f, b});
      if (!(f > 0.0) || !(b > 0.0) || !std::isfinite(f) || !std::isfinite(b))
        report.positivity.push_back({i, j, std::min(f, b)});
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index k = i + 1; k < n; ++k) {
      const double direct = space(i, k);
      for (Index j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double excess = direct - (space(i, j) + space(j, k));
        if (excess > tolerance) report.triangle.push_back({i, j, k, excess});
      }
    }
  }
  return report;
}

namespace {

using Mask = std::uint32_t;

// Minimum number of masks from `sets` whose union covers `target`.
struct ExactCover {
  const std::vector<Mask>& sets;
  std::size_t best;

  void search(Mask uncovered, std::size_t used) {
    if (uncovered == 0) {
      best = std::min(best, used);
      return;
    }
    if (used + 1 >= best) return;
    const Mask low = uncovered & (~uncovered + 1);
    for (Mask s : sets) {
      if (s & low) search(uncovered & ~s, used + 1);
    }
  }
};

template <class Contains>
std::size_t greedy_cover(std::size_t n, const std::vector<Index>& target, Contains&& in_ball) {
  std::vector<char> covered(n, 0);
  std::size_t remaining = target.size();
  std::size_t count = 0;
  while (remaining > 0) {
    Index best_center = 0;
    std::size_t best_gain = 0;
    for (Index c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (Index y : target)
        if (!covered[y] && in_ball(c, y)) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best_center = c;
      }
    }
    for (Index y : target) {
      if (!covered[y] && in_ball(best_center, y)) {
        covered[y] = 1;
        --remaining;
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

DoublingEstimate doubling_constant(const FiniteMetricSpace& space, std::size_t exact_limit) {
  const std::size_t n = space.size();
  DoublingEstimate result;
  if (n <= 1) return result;
  const bool exact = n <= exact_limit && n <= 32;
  result.exact = exact;

  for (Index x = 0; x < n; ++x) {
    std::vector<double> radii(space.row(x).begin(), space.row(x).end());
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double r : radii) {
      if (r <= 0.0) continue;
      std::vector<Index> ball;
      for (Index y = 0; y < n; ++y)
        if (space(x, y) <= r + kMetricTolerance) ball.push_back(y);
      if (ball.size() <= result.value) continue;
      const double half = r / 2.0 + kMetricTolerance;
      auto in_ball = [&](Index c, Index y) { return space(c, y) <= half; };

      std::size_t cover = greedy_cover(n, ball, in_ball);
      if (exact && cover > 1) {
        // Bit k of a mask stands for ball[k].
        std::vector<Mask> sets;
        for (Index c = 0; c < n; ++c) {
          Mask m = 0;
          for (std::size_t k = 0; k < ball.size(); ++k)
            if (in_ball(c, ball[k])) m |= Mask{1} << k;
          if (m != 0) sets.push_back(m);
        }
        std::sort(sets.begin(), sets.end(),
                  [](Mask a, Mask b) {
                    const int pa = std::popcount(a), pb = std::popcount(b);
                    return pa != pb ? pa > pb : a < b;
                  });
        sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
        const Mask full = ball.size() == 32 ? ~Mask{0} : ((Mask{1} << ball.size()) - 1);
        ExactCover solver{sets, cover};
        solver.search(full, 0);
        cover = solver.best;
      }
      if (cover > result.value) {
        result.value = cover;
        result.center = x;
        result.radius = r;
      }
    }
  }
  return result;
}

}  // namespace lipquot
