#pragma once

#include <span>
#include <string>
#include <vector>

#include "lipquot/metric_space.hpp"

namespace lipquot {

/// Tabulated real-valued map: values[i] is the image of point i of its domain.
struct ScalarMap {
  std::string domain_ref;
  std::vector<double> values;
};

struct LipschitzReport {
  double value = 0.0;
  Index a = 0, b = 0;  // worst pair
};

// max |f(u) - f(v)| / d(u,v) over distinct pairs.
LipschitzReport measure_lipschitz(const FiniteMetricSpace& space, std::span<const double> values);

struct LightnessWitness {
  double radius = 0.0;
  double window_low = 0.0;  // E = [window_low, window_low + radius]
  IndexSet component;       // the radius-component attaining the ratio
  Index a = 0, b = 0;       // its diameter pair
  double diameter = 0.0;
};

struct LightnessReport {
  double lipschitz = 0.0;
  double lightness = 0.0;
  LightnessWitness witness;
};

// Exact lightness constant: the supremum over r > 0 and windows E = [t, t+r]
// of diam(r-component of f^-1(E)) / r. For a fixed window start the largest
// component diameter is a nondecreasing step function of r, so the ratio
// only needs evaluating where it jumps. O(n^3) time, O(n^2) memory.
LightnessReport measure_lightness(const FiniteMetricSpace& space, std::span<const double> values);

// x -> c - |f(x) - c|; 1-Lipschitz post-composition.
std::vector<double> fold(std::span<const double> values, double c);

struct MetricLightnessReport {
  double lightness = 0.0;  // exact value when `exact`, else the upper bound
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  double radius = 0.0;  // radius where the reported value is attained
  IndexSet component;
};

// Lightness of a map into a finite metric space (image[i] is the target point
// of domain point i). With at most `exact_limit` distinct image points the
// value is exact: for every critical radius each maximal target set of
// diameter <= r (a maximal clique of the threshold graph) is examined.
// Otherwise closed target balls give bounds: B(e, r/2) is an admissible set
// (lower) and every admissible set through e lies in B(e, r) (upper).
MetricLightnessReport measure_metric_lightness(const FiniteMetricSpace& domain,
                                               const FiniteMetricSpace& target,
                                               std::span<const Index> image,
                                               std::size_t exact_limit = 40);

}  // namespace lipquot
