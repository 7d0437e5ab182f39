#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lipquot {

using Index = std::size_t;
// Sorted, duplicate-free list of point indices.
using IndexSet = std::vector<Index>;

// Absolute tolerance for every metric comparison in the library.
inline constexpr double kMetricTolerance = 1e-9;

IndexSet make_index_set(std::vector<Index> raw);
bool contains(const IndexSet& set, Index i);
IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
IndexSet all_indices(std::size_t n);

/// A finite point set with a full distance matrix and an optional basepoint.
///
/// The matrix is stored exactly as given (row-major) so that asymmetric or
/// otherwise broken inputs survive until validate_metric() reports them.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> ids, std::vector<double> row_major,
                    std::optional<Index> basepoint = std::nullopt);
  explicit FiniteMetricSpace(const std::vector<std::vector<double>>& matrix,
                             std::optional<Index> basepoint = std::nullopt);

  static FiniteMetricSpace euclidean(std::span<const std::array<double, 2>> points);
  static FiniteMetricSpace on_line(std::span<const double> xs);

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  double operator()(Index i, Index j) const noexcept { return dist_[i * n_ + j]; }
  std::span<const double> row(Index i) const { return {dist_.data() + i * n_, n_}; }
  const std::vector<double>& matrix() const noexcept { return dist_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::optional<Index> basepoint() const noexcept { return basepoint_; }

  FiniteMetricSpace with_basepoint(std::optional<Index> basepoint) const;
  // Induced subspace; local index k is subset[k]. The basepoint survives when
  // it lies in the subset.
  FiniteMetricSpace subspace(std::span<const Index> subset) const;
  FiniteMetricSpace scaled(double factor) const;
  // d -> d^s, the snowflake of the metric.
  FiniteMetricSpace snowflaked(double s) const;

  // +infinity for an empty set.
  double distance_to(Index x, std::span<const Index> set) const;
  double diameter() const;
  double diameter(std::span<const Index> subset) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> dist_;
  std::optional<Index> basepoint_;
};

bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

struct SymmetryViolation {
  Index i, j;
  double forward, backward;
};
struct TriangleViolation {
  Index i, j, k;  // d(i,k) > d(i,j) + d(j,k)
  double excess;
};
struct DiagonalViolation {
  Index i;
  double value;
};
struct PositivityViolation {
  Index i, j;
  double value;
};

struct ValidationReport {
  std::vector<DiagonalViolation> diagonal;
  std::vector<SymmetryViolation> symmetry;
  std::vector<PositivityViolation> positivity;
  std::vector<TriangleViolation> triangle;

  bool valid() const noexcept {
    return diagonal.empty() && symmetry.empty() && positivity.empty() && triangle.empty();
  }
};

ValidationReport validate_metric(const FiniteMetricSpace& space,
                                 double tolerance = kMetricTolerance);

struct DoublingEstimate {
  std::size_t value = 1;
  bool exact = true;
  // Ball that attains the value.
  Index center = 0;
  double radius = 0.0;
};

// Smallest D such that every closed ball B(x, r), r a distance from x, is
// covered by D closed balls of radius r/2 centred in the space. Exact set
// cover for spaces with at most `exact_limit` points, greedy cover otherwise.
DoublingEstimate doubling_constant(const FiniteMetricSpace& space, std::size_t exact_limit = 20);

}  // namespace lipquot
