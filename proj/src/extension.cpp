#include "lipquot/extension.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lipquot/errors.hpp"

namespace lipquot {

double lipschitz_constant_on(const FiniteMetricSpace& space, std::span<const Index> subset,
                             std::span<const double> values) {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double d = space(subset[a], subset[b]);
      if (d <= 0.0) continue;
      best = std::max(best, std::abs(values[a] - values[b]) / d);
    }
  }
  return best;
}

std::vector<double> mcshane_extend(const FiniteMetricSpace& space, std::span<const Index> subset,
                                   std::span<const double> values, double lipschitz) {
  if (subset.size() != values.size())
    throw InputError("mcshane_extend: subset and values differ in length");
  if (subset.empty()) throw PreconditionError("mcshane_extend: empty subset");
  if (!(lipschitz > 0.0)) throw PreconditionError("mcshane_extend: L must be positive");

  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double d = space(subset[a], subset[b]);
      const double gap = std::abs(values[a] - values[b]);
      if (gap > lipschitz * d + kMetricTolerance * std::max(1.0, lipschitz)) {
        throw LipschitzViolation("mcshane_extend: |f(" + std::to_string(subset[a]) + ") - f(" +
                                     std::to_string(subset[b]) + ")| = " + std::to_string(gap) +
                                     " exceeds L·d = " + std::to_string(lipschitz * d),
                                 subset[a], subset[b]);
      }
    }
  }

  std::vector<double> out(space.size(), std::numeric_limits<double>::infinity());
  for (Index x = 0; x < space.size(); ++x)
    for (std::size_t k = 0; k < subset.size(); ++k)
      out[x] = std::min(out[x], values[k] + lipschitz * space(x, subset[k]));
  for (std::size_t k = 0; k < subset.size(); ++k) out[subset[k]] = values[k];
  return out;
}

}  // namespace lipquot
