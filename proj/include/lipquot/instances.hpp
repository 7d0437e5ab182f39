#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "lipquot/chains.hpp"
#include "lipquot/freespace.hpp"
#include "lipquot/metric_space.hpp"
#include "lipquot/quotient.hpp"
#include "lipquot/tree.hpp"
#include "lipquot/tree_gen.hpp"

// Random instance generators shared by the harness, the CLI and the tests.
// Every generator draws only from the engine it is handed.
namespace lipquot {

using Rng = std::mt19937_64;

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi);
double uniform_real(Rng& rng, double lo, double hi);

// n uniform points in the square [0, side]^2.
FiniteMetricSpace random_planar_space(Rng& rng, std::size_t n, double side = 1.0);

// n distinct points of the integer grid with the l1 metric; every distance,
// sum and minimum of distances is an exact double.
FiniteMetricSpace random_integer_space(Rng& rng, std::size_t n, int grid = 12);

// Nonempty random subset of {0..n-1}; each index kept with probability p.
IndexSet random_subset(Rng& rng, std::size_t n, double p);

// gen_tree with a seed drawn from rng, remetrized when not 1-bounded turning.
MetricTree random_tree(Rng& rng, std::size_t n, TreeProfile profile);

// Random nonempty measure; integer coefficients in [-3, 3] when `integral`.
FreeVector random_free_vector(Rng& rng, std::size_t n, bool integral = false);

// Points of a random Cantor set on [0, 1]: each interval keeps two end pieces
// of relative length below (1 - alpha)/2, so every relative chain has to jump
// a gap wider than alpha times its span. `levels` >= 1 gives 2^levels points.
std::vector<double> cantor_points(Rng& rng, std::size_t levels, double alpha);

struct DisconnectedInstance {
  FiniteMetricSpace space;
  IndexSet collapsed;  // Y, constructed alpha-uniformly disconnected
  double alpha = 0.5;
};
// A Cantor set Y on the x-axis plus `extra` random points of the plane.
DisconnectedInstance disconnected_instance(Rng& rng, double alpha, std::size_t levels,
                                           std::size_t extra);

struct ChainLiftInstance {
  FiniteMetricSpace space;
  IndexSet source;     // B
  IndexSet collapsed;  // E
  QuotientSpace quotient;
  Chain chain;  // nondegenerate relative alpha-chain of classes in [B ∪ E]
  double alpha = 0.125;
};
// Dense random points B with a few far or nearby points E; retries until a
// nondegenerate relative alpha-chain between two classes of [B] exists.
ChainLiftInstance chain_lift_instance(Rng& rng, double alpha);

// Based spaces for a pointed sum: each piece is a random planar set with
// basepoint 0.
std::vector<FiniteMetricSpace> random_pieces(Rng& rng, std::size_t count, std::size_t max_size,
                                             bool integral = false);

struct UnionInstance {
  FiniteMetricSpace ambient;
  std::vector<std::vector<Index>> paths;  // each part is a polygonal path of points
};
// Straight segments in the plane, discretized. Each new segment starts at a
// point of an earlier one or, now and then, far away from all of them.
UnionInstance random_segment_union(Rng& rng, std::size_t segments, std::size_t per_segment);

}  // namespace lipquot
