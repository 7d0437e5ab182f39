#pragma once

#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lipquot/metric_space.hpp"
#include "lipquot/quotient.hpp"

namespace lipquot {

using Rational = boost::multiprecision::cpp_rational;

/// Finitely supported signed measure sum_i coeffs[i] * delta_{support[i]}.
struct FreeVector {
  std::vector<Index> support;
  std::vector<double> coeffs;
};

// Validates (distinct in-range support, finite coefficients) and drops zero
// coefficients. Throws InputError.
FreeVector make_free_vector(std::vector<Index> support, std::vector<double> coeffs,
                            std::size_t space_size);

// Image of mu under a point map: coefficients landing on the same point add up.
FreeVector push_forward(const FreeVector& mu, std::span<const Index> map, std::size_t target_size);

// Largest primal/dual disagreement tolerated before a SolverError.
inline constexpr double kDualityGap = 1e-6;

struct FreeNormResult {
  double primal = 0.0;  // min-cost flow, basepoint absorbing the imbalance
  double dual = 0.0;    // LP over 1-Lipschitz f with f(x0) = 0
  double gap = 0.0;
  std::vector<double> potential;  // maximizing f, one value per point
  std::vector<std::vector<double>> flow;
};

// Both sides of the transport duality, solved independently. Throws
// PreconditionError without a basepoint and SolverError when the two values
// differ by more than kDualityGap.
FreeNormResult free_norm_detailed(const FiniteMetricSpace& space, const FreeVector& mu);
double free_norm(const FiniteMetricSpace& space, const FreeVector& mu);

struct ConstrainedNormResult {
  double value = 0.0;
  std::vector<double> potential;  // certificate: 1-Lipschitz, zero on A and x0
};

// sup { sum a_i f(x_i) : Lip(f) <= 1, f = 0 on A and at the basepoint }.
ConstrainedNormResult constrained_dual_norm(const FiniteMetricSpace& space, const FreeVector& mu,
                                            const IndexSet& subset);

// Exact counterparts; every double distance is read as the rational it is.
Rational free_norm_flow_exact(const FiniteMetricSpace& space, const FreeVector& mu);
Rational constrained_dual_norm_exact(const FiniteMetricSpace& space, const FreeVector& mu,
                                     const IndexSet& subset);

struct QuotientDualityReport {
  double constrained = 0.0;     // LP on X
  double quotient_norm = 0.0;   // flow on X/A with the pushed-forward measure
  double gap = 0.0;
  bool passes = true;
};

// Compares the constrained dual norm on X with the free norm of the
// pushed-forward measure on X/A. Functions on X/A vanish at [A] only, so the
// basepoint of X is collapsed along with A.
QuotientDualityReport quotient_duality_check(const FiniteMetricSpace& space, const IndexSet& subset,
                                             const FreeVector& mu);

struct ExactQuotientDuality {
  Rational constrained;
  Rational quotient_norm;
  bool equal = false;
};
ExactQuotientDuality quotient_duality_exact(const FiniteMetricSpace& space, const IndexSet& subset,
                                            const FreeVector& mu);

struct SumDecompositionReport {
  double whole = 0.0;
  std::vector<double> pieces;
  double piece_total = 0.0;
  double gap = 0.0;
  bool passes = true;
};

// The pieces of a sum as based spaces (glue point first, basepoint 0).
std::vector<std::pair<FiniteMetricSpace, std::vector<Index>>> sum_pieces(const SumSpace& sum);

// free_norm of mu on the sum against the total over pieces of mu restricted
// to each piece.
SumDecompositionReport sum_decomposition_check(const SumSpace& sum, const FreeVector& mu);

struct ExactSumDecomposition {
  Rational whole;
  Rational piece_total;
  bool equal = false;
};
ExactSumDecomposition sum_decomposition_exact(const SumSpace& sum, const FreeVector& mu);

struct BiLipschitzNormReport {
  double lower = 0.0;  // min d_B(phi a, phi b) / d_A(a, b)
  double upper = 0.0;  // max of the same ratio
  double norm_a = 0.0;
  double norm_b = 0.0;
  double ratio = 1.0;  // norm_b / norm_a (1 when both vanish)
  bool within_distortion = true;  // lower <= ratio <= upper
  bool within_lambda = true;      // 1/lambda <= ratio <= lambda
  bool passes() const { return within_distortion && within_lambda; }
};

// `correspondence` maps points of A bijectively onto points of B and the
// basepoint onto the basepoint. Throws PreconditionError otherwise.
BiLipschitzNormReport bilipschitz_norm_comparison(const FiniteMetricSpace& a,
                                                  const FiniteMetricSpace& b,
                                                  std::span<const Index> correspondence,
                                                  const FreeVector& mu, double lambda);

}  // namespace lipquot
