#pragma once

#include <span>
#include <vector>

#include "lipquot/metric_space.hpp"

namespace lipquot {

// Largest |f(a)-f(b)|/d(a,b) over distinct pairs of `subset`; values[k]
// belongs to subset[k]. Zero for fewer than two points.
double lipschitz_constant_on(const FiniteMetricSpace& space, std::span<const Index> subset,
                             std::span<const double> values);

// McShane extension F(x) = min_{y in S} f(y) + L·d(x,y). values[k] is f at
// subset[k]. Throws LipschitzViolation when f is not L-Lipschitz on S.
// F equals f on S exactly.
std::vector<double> mcshane_extend(const FiniteMetricSpace& space, std::span<const Index> subset,
                                   std::span<const double> values, double lipschitz);

}  // namespace lipquot
