#pragma once

#include <cstdint>
#include <string>

#include "lipquot/tree.hpp"

namespace lipquot {

enum class TreeProfile { geodesic, snowflake, comb, vicsek };

struct TreeGenOptions {
  TreeProfile profile = TreeProfile::geodesic;
  // Exponent for the snowflake profile, in (0,1].
  double snowflake_s = 0.5;
};

TreeProfile parse_tree_profile(const std::string& name);
std::string to_string(TreeProfile profile);

// Deterministic in (n, seed, options).
//  geodesic  random recursive tree (long chains favoured), edge lengths in
//            [0.5,1.5], path metric; C = 1.
//  snowflake the geodesic tree with d -> d^s; C = 1.
//  comb      unit-edge path metric: a spine with a tooth hanging off each
//            spine vertex; C = 1.
//  vicsek    the diagonal ("X") Vicsek tree in the plane, Euclidean metric,
//            largest full level with at most n points, padded to n by
//            subdividing random edges at midpoints.
MetricTree gen_tree(std::size_t n, std::uint64_t seed, const TreeGenOptions& options = {});

// Path-length metric of a weighted tree.
FiniteMetricSpace path_metric(std::size_t n, const std::vector<Edge>& edges,
                              const std::vector<double>& lengths);

}  // namespace lipquot
