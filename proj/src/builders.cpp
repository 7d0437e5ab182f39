#include "lipquot/builders.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "lipquot/chains.hpp"
#include "lipquot/errors.hpp"
#include "lipquot/extension.hpp"

namespace lipquot {

namespace {

constexpr double kBoundSlack = 1e-9;

// Base map of a path onto [0, D], D = diam(path).
std::vector<double> bisection_base(const FiniteMetricSpace& space, std::span<const Index> path) {
  const std::size_t k = path.size();
  std::vector<double> g(k, 0.0);
  if (k < 2) return g;
  g[k - 1] = space.diameter(path);

  struct Segment {
    std::size_t i, j;
  };
  std::vector<Segment> stack{{0, k - 1}};
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    if (j - i <= 1) continue;
    const double seg_diam = space.diameter(path.subspan(i, j - i + 1));
    std::size_t s = 0;
    for (std::size_t t = i + 1; t < j; ++t) {
      if (space(path[i], path[t]) >= seg_diam / 2.0) {
        s = t;
        break;
      }
    }
    if (s == 0) {
      s = i + 1;
      for (std::size_t t = i + 2; t < j; ++t)
        if (space(path[i], path[t]) > space(path[i], path[s])) s = t;
    }
    const double A = g[i], B = g[j];
    const double d1 = space(path[i], path[s]);
    const double d2 = space(path[s], path[j]);
    // Candidates: distance-weighted interpolation, then the two extremes of
    // the interval that keeps both new steps 1-Lipschitz. The one that moves
    // furthest from both ends (relative to the step) wins; this is the tent
    // value when A = B.
    std::vector<double> candidates{(A * d2 + B * d1) / (d1 + d2)};
    const double lo = std::max(A - d1, B - d2);
    const double hi = std::min(A + d1, B + d2);
    if (lo <= hi) {
      candidates.push_back(hi);
      candidates.push_back(lo);
    }
    double best = candidates.front();
    double best_score = -1.0;
    for (double t : candidates) {
      const double score = std::min(std::abs(t - A) / d1, std::abs(t - B) / d2);
      if (score > best_score + 1e-15) {
        best_score = score;
        best = t;
      }
    }
    g[s] = best;
    stack.push_back({i, s});
    stack.push_back({s, j});
  }
  return g;
}

// Breadth-first r-chain between a and b inside `members`.
std::vector<Index> chain_inside(const FiniteMetricSpace& space, const IndexSet& members, Index a,
                                Index b, double r) {
  const std::size_t m = members.size();
  auto pos = [&](Index x) {
    return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), x) -
                                    members.begin());
  };
  std::vector<std::size_t> prev(m, m);
  std::vector<char> seen(m, 0);
  std::deque<std::size_t> queue{pos(a)};
  seen[pos(a)] = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (members[u] == b) break;
    for (std::size_t v = 0; v < m; ++v) {
      if (!seen[v] && space(members[u], members[v]) <= r) {
        seen[v] = 1;
        prev[v] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<Index> chain;
  for (std::size_t u = pos(b); u != m; u = prev[u]) chain.push_back(members[u]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<double> restrict_values(std::span<const double> values, const IndexSet& subset) {
  std::vector<double> out;
  out.reserve(subset.size());
  for (Index x : subset) out.push_back(values[x]);
  return out;
}

double lightness_on(const FiniteMetricSpace& space, std::span<const double> values,
                    const IndexSet& subset) {
  if (subset.size() < 2) return 0.0;
  return measure_lightness(space.subspace(subset), restrict_values(values, subset)).lightness;
}

double lipschitz_on(const FiniteMetricSpace& space, std::span<const double> values,
                    const IndexSet& subset) {
  if (subset.size() < 2) return 0.0;
  return measure_lipschitz(space.subspace(subset), restrict_values(values, subset)).value;
}

void require_one_bounded_turning(const MetricTree& tree, const char* who) {
  const TurningReport turning = bounded_turning(tree);
  if (turning.value > 1.0 + kBoundSlack) {
    throw PreconditionError(std::string(who) + ": tree is not 1-bounded turning (C = " +
                            std::to_string(turning.value) + ")");
  }
}

std::pair<Index, Index> farthest_leaf_pair(const MetricTree& tree) {
  const IndexSet leaves = tree.leaves();
  std::pair<Index, Index> best{leaves.front(), leaves.back()};
  double far = -1.0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      if (tree(leaves[i], leaves[j]) > far) {
        far = tree(leaves[i], leaves[j]);
        best = {leaves[i], leaves[j]};
      }
    }
  }
  return best;
}

// Closure-local index of every boundary vertex of a component.
IndexSet local_positions(const IndexSet& closure, const IndexSet& which) {
  IndexSet out;
  for (std::size_t k = 0; k < closure.size(); ++k)
    if (contains(which, closure[k])) out.push_back(k);
  return out;
}

}  // namespace

std::vector<double> arc_values(const FiniteMetricSpace& space, std::span<const Index> path,
                               double a, double b) {
  if (path.empty()) return {};
  if (path.size() == 1) return {a};
  std::vector<double> g = bisection_base(space, path);
  const double diam = g.back();
  const double r = std::abs(a - b) / diam;
  const double sign = b >= a ? 1.0 : -1.0;
  std::vector<double> out(g.size());
  if (r >= 1.0) {
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = a + sign * r * g[k];
  } else {
    // Fold [0, diam] at the midpoint of r·diam and diam, keeping 0 fixed.
    const double m = diam * (1.0 + r) / 2.0;
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = a + sign * (m - std::abs(g[k] - m));
  }
  out.front() = a;
  out.back() = b;
  return out;
}

std::vector<double> build_arc_map(const MetricTree& arc, double a, double b) {
  if (!arc.branch_points().empty())
    throw PreconditionError("build_arc_map: domain is not an arc (vertex " +
                            std::to_string(arc.branch_points().front()) + " has degree " +
                            std::to_string(arc.degree(arc.branch_points().front())) + ")");
  if (arc.size() == 1) return {a};
  const IndexSet leaves = arc.leaves();
  const std::vector<Index> path = arc.arc(leaves.front(), leaves.back());
  const std::vector<double> along = arc_values(arc.space(), path, a, b);
  std::vector<double> values(arc.size());
  for (std::size_t k = 0; k < path.size(); ++k) values[path[k]] = along[k];
  return values;
}

TwoPieceReport glue_two_piece_check(const FiniteMetricSpace& space, std::span<const double> values,
                                    const IndexSet& first, const IndexSet& second) {
  if (values.size() != space.size()) throw InputError("glue_two_piece_check: size mismatch");
  if (set_union(first, second).size() != space.size())
    throw PreconditionError("glue_two_piece_check: the two pieces must cover the domain");
  TwoPieceReport report;
  report.q_first = lightness_on(space, values, first);
  report.q_second = lightness_on(space, values, second);
  report.q_union = measure_lightness(space, values).lightness;
  const double q = std::max(report.q_first, report.q_second);
  report.bound = 2.0 * q * (q + 2.0) + 1.0;
  report.passes = report.q_union <= report.bound + kBoundSlack;
  return report;
}

GlueReport audit_glue(const MetricTree& tree, const IndexSet& subset,
                      std::span<const double> values) {
  GlueReport report;
  const FiniteMetricSpace& space = tree.space();
  std::vector<IndexSet> pieces{subset};
  for (const TreeComponent& comp : components_minus(tree, subset)) pieces.push_back(comp.closure);
  for (const IndexSet& piece : pieces) {
    report.l0 = std::max(report.l0, lipschitz_on(space, values, piece));
    report.q0 = std::max(report.q0, lightness_on(space, values, piece));
  }
  const LightnessReport whole = measure_lightness(space, values);
  report.l_hat = whole.lipschitz;
  report.q_hat = whole.lightness;
  report.l_bound = 2.0 * report.l0;
  report.q_bound = 6.0 * report.l_bound * report.q0 * report.q0;

  const LightnessWitness& w = whole.witness;
  if (w.radius > 0.0 && w.a != w.b) {
    const std::vector<Index> chain = chain_inside(space, w.component, w.a, w.b, w.radius);
    const double reach = arc_distance_to_chain(tree, chain);
    report.chain_neighbourhood_excess = std::max(0.0, reach - w.radius);
    report.chain_neighbourhood_ok = reach <= w.radius + kBoundSlack;
  }
  report.passes = report.l_hat <= report.l_bound + kBoundSlack &&
                  report.q_hat <= report.q_bound + kBoundSlack && report.chain_neighbourhood_ok;
  return report;
}

GlueResult glue_subset_components(const MetricTree& tree, const PieceValues& on_subset,
                                  std::span<const PieceValues> pieces) {
  const std::size_t n = tree.size();
  if (on_subset.vertices.size() != on_subset.values.size())
    throw InputError("glue_subset_components: subset values misaligned");
  GlueResult out;
  out.values.assign(n, 0.0);
  std::vector<char> set(n, 0);
  for (std::size_t k = 0; k < on_subset.vertices.size(); ++k) {
    out.values[on_subset.vertices[k]] = on_subset.values[k];
    set[on_subset.vertices[k]] = 1;
  }

  const std::vector<TreeComponent> comps = components_minus(tree, on_subset.vertices);
  if (comps.size() != pieces.size())
    throw PreconditionError("glue_subset_components: expected " + std::to_string(comps.size()) +
                            " component maps, got " + std::to_string(pieces.size()));
  for (const PieceValues& piece : pieces) {
    if (piece.vertices.size() != piece.values.size())
      throw InputError("glue_subset_components: piece values misaligned");
    const bool known = std::any_of(comps.begin(), comps.end(), [&](const TreeComponent& c) {
      return c.closure == piece.vertices;
    });
    if (!known)
      throw PreconditionError("glue_subset_components: a piece is not a component closure");
    for (std::size_t k = 0; k < piece.vertices.size(); ++k) {
      const Index x = piece.vertices[k];
      if (contains(on_subset.vertices, x)) {
        if (piece.values[k] != out.values[x])
          throw PreconditionError("glue_subset_components: pieces disagree at vertex " +
                                  std::to_string(x));
      } else {
        out.values[x] = piece.values[k];
        set[x] = 1;
      }
    }
  }
  if (std::find(set.begin(), set.end(), 0) != set.end())
    throw PreconditionError("glue_subset_components: some vertex received no value");
  out.report = audit_glue(tree, on_subset.vertices, out.values);
  return out;
}

LeafExtension extend_from_leaves(const MetricTree& tree, std::span<const double> leaf_values) {
  const IndexSet leaves = tree.leaves();
  if (leaf_values.size() != leaves.size())
    throw InputError("extend_from_leaves: expected one value per leaf");
  LeafExtension out;
  const std::size_t n = tree.size();
  if (n == 1) {
    out.values = {leaf_values[0]};
    return out;
  }
  const IndexSet branch = tree.branch_points();
  const IndexSet anchors = set_union(leaves, branch);
  out.mcshane_constant = std::max(1.0, lipschitz_constant_on(tree.space(), leaves, leaf_values));
  out.values = mcshane_extend(tree.space(), leaves, leaf_values, out.mcshane_constant);
  // Leaves keep their data bit for bit.
  for (std::size_t k = 0; k < leaves.size(); ++k) out.values[leaves[k]] = leaf_values[k];

  for (const TreeComponent& comp : components_minus(tree, anchors)) {
    const Index p = comp.boundary.front();
    const Index q = comp.boundary.back();
    const std::vector<Index> path = tree.arc(p, q);
    const double a = out.values[p];
    const double b = out.values[q];
    const double diam = tree.space().diameter(path);
    std::vector<double> along;
    if (std::abs(a - b) > diam) {
      // Clamp the far target, then ramp the remainder in linearly.
      const double clamped = b > a ? a + diam : a - diam;
      along = arc_values(tree.space(), path, a, clamped);
      for (std::size_t k = 0; k < path.size(); ++k) {
        const double dp = tree(p, path[k]);
        const double dq = tree(path[k], q);
        along[k] += dp / (dp + dq) * (b - clamped);
      }
      along.front() = a;
      along.back() = b;
      ++out.gap_repairs;
    } else {
      along = arc_values(tree.space(), path, a, b);
    }
    for (std::size_t k = 1; k + 1 < path.size(); ++k) out.values[path[k]] = along[k];
    ++out.arcs_filled;
  }
  return out;
}

std::vector<double> tree_map(const MetricTree& tree) {
  const std::size_t n = tree.size();
  if (n == 1) return {0.0};
  std::vector<double> values(n, 0.0);
  const auto [u, v] = farthest_leaf_pair(tree);
  const std::vector<Index> path = tree.arc(u, v);
  const std::vector<double> along = arc_values(tree.space(), path, 0.0, tree(u, v));
  for (std::size_t k = 0; k < path.size(); ++k) values[path[k]] = along[k];

  for (const TreeComponent& comp : components_minus(tree, make_index_set(path))) {
    const Subtree sub = induced_subtree(tree, comp.closure);
    const std::vector<double> g = tree_map(sub.tree);
    const Index p = comp.boundary.front();
    const double shift = values[p] - g[*sub.local(p)];
    for (std::size_t k = 0; k < sub.to_parent.size(); ++k)
      if (sub.to_parent[k] != p) values[sub.to_parent[k]] = g[k] + shift;
  }
  return values;
}

SubsetExtension extend_from_leaf_subset(const MetricTree& tree, const IndexSet& marked,
                                        std::span<const double> marked_values) {
  if (marked.empty()) throw PreconditionError("extend_from_leaf_subset: M is empty");
  if (marked_values.size() != marked.size())
    throw InputError("extend_from_leaf_subset: expected one value per marked leaf");
  for (Index m : marked)
    if (!tree.is_leaf(m))
      throw PreconditionError("extend_from_leaf_subset: vertex " + std::to_string(m) +
                              " is not a leaf");

  SubsetExtension out;
  const IndexSet hull_set = hull(tree, marked);
  PieceValues on_hull{hull_set, {}};
  {
    const Subtree sub = induced_subtree(tree, hull_set);
    const IndexSet sub_leaves = sub.tree.leaves();
    std::vector<double> leaf_values;
    for (Index l : sub_leaves) {
      const Index x = sub.to_parent[l];
      const auto it = std::lower_bound(marked.begin(), marked.end(), x);
      if (it == marked.end() || *it != x)
        throw StructuralError("extend_from_leaf_subset: hull leaf " + std::to_string(x) +
                              " is not in M");
      leaf_values.push_back(marked_values[static_cast<std::size_t>(it - marked.begin())]);
    }
    const LeafExtension ext = extend_from_leaves(sub.tree, leaf_values);
    out.gap_repairs = ext.gap_repairs;
    on_hull.values = ext.values;
  }

  std::vector<PieceValues> pieces;
  for (const TreeComponent& comp : components_minus(tree, hull_set)) {
    const Subtree sub = induced_subtree(tree, comp.closure);
    const std::vector<double> g = tree_map(sub.tree);
    const Index p = comp.boundary.front();
    const auto hp = std::lower_bound(hull_set.begin(), hull_set.end(), p) - hull_set.begin();
    const double anchor = on_hull.values[static_cast<std::size_t>(hp)];
    const double shift = anchor - g[*sub.local(p)];
    PieceValues piece{comp.closure, std::vector<double>(g.size())};
    for (std::size_t k = 0; k < g.size(); ++k)
      piece.values[k] = sub.to_parent[k] == p ? anchor : g[k] + shift;
    pieces.push_back(std::move(piece));
  }

  GlueResult glued = glue_subset_components(tree, on_hull, pieces);
  for (std::size_t k = 0; k < marked.size(); ++k)
    if (glued.values[marked[k]] != marked_values[k])
      throw StructuralError("extend_from_leaf_subset: value at marked leaf " +
                            std::to_string(marked[k]) + " changed");
  out.values = std::move(glued.values);
  out.glue = glued.report;
  return out;
}

UnionMapResult union_map(const FiniteMetricSpace& ambient, std::span<const UnionPart> parts) {
  if (parts.empty()) throw PreconditionError("union_map: no trees given");
  UnionMapResult out;
  out.values.assign(ambient.size(), 0.0);
  IndexSet done;  // X_{k-1}

  for (std::size_t k = 0; k < parts.size(); ++k) {
    const UnionPart& part = parts[k];
    const IndexSet& verts = part.vertices;
    auto local_of = [&](Index x) {
      const auto it = std::lower_bound(verts.begin(), verts.end(), x);
      if (it == verts.end() || *it != x)
        throw InputError("union_map: edge endpoint " + std::to_string(x) + " outside tree " +
                         std::to_string(k));
      return static_cast<Index>(it - verts.begin());
    };
    std::vector<Edge> local_edges;
    for (const auto& [a, b] : part.edges) local_edges.emplace_back(local_of(a), local_of(b));
    const MetricTree tree(ambient.subspace(verts), local_edges);
    UnionStage stage;
    stage.turning = bounded_turning(tree).value;
    if (stage.turning > 1.0 + kBoundSlack)
      throw PreconditionError("union_map: tree " + std::to_string(k) +
                              " is not 1-bounded turning in the ambient metric (C = " +
                              std::to_string(stage.turning) + ")");

    IndexSet shared_local;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (contains(done, verts[i])) shared_local.push_back(i);
    stage.shared = shared_local.size();

    std::vector<double> local_values;
    if (shared_local.empty()) {
      local_values = tree_map(tree);
    } else {
      local_values.assign(tree.size(), 0.0);
      for (Index i : shared_local) local_values[i] = out.values[verts[i]];
      const std::vector<TreeComponent> comps = components_minus(tree, shared_local);
      stage.components = comps.size();
      std::vector<PieceValues> pieces;
      for (const TreeComponent& comp : comps) {
        const Subtree sub = induced_subtree(tree, comp.closure);
        const IndexSet marked = local_positions(comp.closure, comp.boundary);
        std::vector<double> marked_values;
        for (Index m : marked) marked_values.push_back(local_values[comp.closure[m]]);
        const SubsetExtension ext = extend_from_leaf_subset(sub.tree, marked, marked_values);
        pieces.push_back({comp.closure, ext.values});
      }
      const GlueResult glued =
          glue_subset_components(tree, {shared_local, restrict_values(local_values, shared_local)},
                                 pieces);
      local_values = glued.values;
      stage.glue = glued.report;
      out.passes = out.passes && glued.report.passes;
    }
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (!contains(done, verts[i])) out.values[verts[i]] = local_values[i];

    const IndexSet previous = done;
    done = set_union(done, verts);
    if (k > 0) {
      const FiniteMetricSpace sofar = ambient.subspace(done);
      const std::vector<double> sofar_values = restrict_values(out.values, done);
      auto to_local = [&](const IndexSet& s) {
        return local_positions(done, s);
      };
      stage.two_piece = glue_two_piece_check(sofar, sofar_values, to_local(previous),
                                             to_local(verts));
      out.passes = out.passes && stage.two_piece.passes;
    }
    out.stages.push_back(std::move(stage));
  }

  const FiniteMetricSpace all = ambient.subspace(done);
  const LightnessReport final_report = measure_lightness(all, restrict_values(out.values, done));
  out.l_hat = final_report.lipschitz;
  out.q_hat = final_report.lightness;
  return out;
}

namespace {

// Ambient space from planar points plus parts given as point chains.
std::pair<FiniteMetricSpace, std::vector<UnionPart>> planar_union(
    const std::vector<std::array<double, 2>>& points,
    const std::vector<std::vector<Index>>& paths) {
  std::vector<UnionPart> parts;
  for (const auto& path : paths) {
    UnionPart part;
    part.vertices = make_index_set(path);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) part.edges.emplace_back(path[k], path[k + 1]);
    parts.push_back(std::move(part));
  }
  return {FiniteMetricSpace::euclidean(points), std::move(parts)};
}

}  // namespace

std::pair<FiniteMetricSpace, std::vector<UnionPart>> cusp_instance(std::size_t per_curve) {
  if (per_curve < 2) throw PreconditionError("cusp_instance: need at least two points per curve");
  std::vector<std::array<double, 2>> points;
  std::vector<Index> flat, curved;
  const double step = 1.0 / static_cast<double>(per_curve - 1);
  for (std::size_t i = 0; i < per_curve; ++i) {
    flat.push_back(points.size());
    points.push_back({static_cast<double>(i) * step, 0.0});
  }
  curved.push_back(0);
  const double curved_step = 1.0 / static_cast<double>(per_curve);
  for (std::size_t i = 1; i <= per_curve; ++i) {
    const double x = static_cast<double>(i) * curved_step;
    curved.push_back(points.size());
    points.push_back({x, x * x});
  }
  return planar_union(points, {flat, curved});
}

std::pair<FiniteMetricSpace, std::vector<UnionPart>> crossing_instance(std::size_t per_arm) {
  if (per_arm < 1) throw PreconditionError("crossing_instance: arms need a point");
  std::vector<std::array<double, 2>> points{{0.0, 0.0}};
  std::vector<std::vector<Index>> arms(4);
  const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int a = 0; a < 4; ++a) {
    for (std::size_t i = 1; i <= per_arm; ++i) {
      arms[a].push_back(points.size());
      const double t = static_cast<double>(i) / static_cast<double>(per_arm);
      points.push_back({dirs[a][0] * t, dirs[a][1] * t});
    }
  }
  auto segment = [&](int a, int b) {
    std::vector<Index> path(arms[a].rbegin(), arms[a].rend());
    path.push_back(0);
    path.insert(path.end(), arms[b].begin(), arms[b].end());
    return path;
  };
  return planar_union(points, {segment(0, 1), segment(2, 3)});
}

WreathMapResult wreath_map(const MetricTree& tree, Index a, Index b) {
  WreathMapResult out;
  out.quotient = wreath(tree, a, b);
  out.tree_values = tree_map(tree);
  out.folded_values = out.tree_values;
  const double fa = out.tree_values[a], fb = out.tree_values[b];
  if (fa != fb) {
    out.folded = true;
    out.folded_values = fold(out.tree_values, (fa + fb) / 2.0);
    const double common = std::min(fa, fb);
    out.folded_values[a] = common;
    out.folded_values[b] = common;
  }
  out.values.assign(out.quotient.size(), 0.0);
  for (Index x = 0; x < tree.size(); ++x) out.values[out.quotient.class_of[x]] = out.folded_values[x];

  out.q_tree = measure_lightness(tree.space(), out.tree_values).lightness;
  const LightnessReport folded = measure_lightness(tree.space(), out.folded_values);
  out.q_folded = folded.lightness;
  out.l_folded = folded.lipschitz;
  const LightnessReport on_wreath = measure_lightness(out.quotient.space, out.values);
  out.q_wreath = on_wreath.lightness;
  out.l_wreath = on_wreath.lipschitz;
  out.bound = 2.0 + 2.0 * out.q_folded;
  out.passes = out.q_wreath <= out.bound + kBoundSlack;
  return out;
}

SumMapResult sum_map(const SumSpace& sum_space, std::span<const FiniteMetricSpace> pieces,
                     std::span<const std::vector<double>> piece_values) {
  if (pieces.size() != sum_space.piece_count() || piece_values.size() != pieces.size())
    throw InputError("sum_map: piece count mismatch");
  SumMapResult out;
  out.values.assign(sum_space.size(), 0.0);
  double worst = 0.0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const auto& vals = piece_values[p];
    if (vals.size() != pieces[p].size()) throw InputError("sum_map: piece map size mismatch");
    const Index base = *pieces[p].basepoint();
    if (vals[base] != 0.0)
      throw PreconditionError("sum_map: piece " + std::to_string(p) +
                              " does not vanish at its basepoint (value " +
                              std::to_string(vals[base]) + ")");
    for (Index x = 0; x < vals.size(); ++x)
      if (x != base) out.values[sum_space.embed[p][x]] = vals[x];
    const LightnessReport r = measure_lightness(pieces[p], vals);
    out.piece_q.push_back(r.lightness);
    out.piece_l.push_back(r.lipschitz);
    worst = std::max(worst, r.lightness);
  }
  const LightnessReport whole = measure_lightness(sum_space.space, out.values);
  out.q = whole.lightness;
  out.l = whole.lipschitz;
  out.bound = 2.0 + 2.0 * worst;
  out.passes = out.q <= out.bound + kBoundSlack;
  return out;
}

QuotientLightnessReport quotient_map_lightness(const FiniteMetricSpace& space,
                                               const IndexSet& collapsed,
                                               std::optional<double> alpha) {
  if (collapsed.empty()) throw PreconditionError("quotient_map_lightness: Y is empty");
  QuotientLightnessReport report;
  const QuotientSpace q = quotient(space, collapsed);
  report.projection = measure_metric_lightness(space, q.space, q.class_of);
  report.alpha_star = collapsed.size() < 2 ? 1.0
                                           : uniform_disconnectedness_constant(space, collapsed);
  report.alpha = alpha ? *alpha : report.alpha_star * (1.0 - 1e-9);
  if (!(report.alpha > 0.0))
    throw PreconditionError("quotient_map_lightness: alpha must be positive");
  report.alpha_admissible = report.alpha < report.alpha_star;
  report.bound = 9.0 / report.alpha + 8.0;
  // The upper estimate is sound whether or not the measurement was exact.
  report.bound_holds = report.projection.upper <= report.bound + kBoundSlack;

  if (collapsed.size() >= 2 && report.projection.upper > 0.0) {
    report.beta = 0.9 / report.projection.upper;
    for (std::size_t i = 0; i < collapsed.size() && !report.converse_witness; ++i) {
      for (std::size_t j = i + 1; j < collapsed.size(); ++j) {
        auto chain =
            find_relative_alpha_chain(space, collapsed[i], collapsed[j], report.beta, collapsed);
        if (chain && is_nondegenerate_relative_chain(space, chain->indices, report.beta)) {
          report.converse_witness = std::move(chain);
          break;
        }
      }
    }
    report.converse_holds = !report.converse_witness;
  }
  return report;
}

QuotientTreeMapResult quotient_tree_map(const MetricTree& tree, const IndexSet& marked) {
  require_one_bounded_turning(tree, "quotient_tree_map");
  QuotientTreeMapResult out;
  out.decomposition = pre_coproduct_decompose(tree, marked);
  const PreCoproduct& pc = out.decomposition;

  std::vector<FiniteMetricSpace> outer_spaces;
  std::vector<std::vector<double>> outer_values;
  double worst_composite = 0.0;

  for (std::size_t i = 0; i < pc.pieces.size(); ++i) {
    const CoproductPieceQuotient& piece = pc.pieces[i];
    const Subtree sub = induced_subtree(tree, piece.component.closure);
    const IndexSet local_marked = local_positions(piece.component.closure,
                                                  piece.component.boundary);
    PieceStage stage;
    stage.vertices = sub.tree.size();
    stage.marked = local_marked.size();

    const CoproductDecomposition cd = coproduct_decompose(sub.tree, local_marked);
    const PreCoproduct& inner = cd.comparison;
    std::vector<FiniteMetricSpace> inner_spaces;
    std::vector<std::vector<double>> inner_values;
    for (std::size_t j = 0; j < cd.pieces.size(); ++j) {
      const CoproductPiece& cp = cd.pieces[j];
      const Subtree leaf_tree = induced_subtree(sub.tree, cp.component.closure);
      const IndexSet ends = local_positions(cp.component.closure, cp.component.boundary);
      const QuotientSpace& qs = inner.pieces[j].quotient;
      std::vector<double> vals(qs.size(), 0.0);
      if (cp.kind == PieceKind::tree) {
        const std::vector<double> g = tree_map(leaf_tree.tree);
        const double anchor = g[ends.front()];
        for (Index x = 0; x < g.size(); ++x) vals[qs.class_of[x]] = g[x] - anchor;
        vals[0] = 0.0;
        const double qv = measure_lightness(qs.space, vals).lightness;
        stage.tree_q.push_back(qv);
        ++stage.tree_pieces;
      } else {
        const WreathMapResult w = wreath_map(leaf_tree.tree, ends.front(), ends.back());
        const double anchor = w.values[0];
        for (Index c = 0; c < w.values.size(); ++c) vals[c] = w.values[c] - anchor;
        vals[0] = 0.0;
        stage.wreath_q.push_back(w.q_wreath);
        stage.wreath_ok = stage.wreath_ok && w.passes;
        ++stage.wreath_pieces;
      }
      inner_spaces.push_back(qs.space);
      inner_values.push_back(std::move(vals));
    }
    const SumMapResult inner_sum = sum_map(inner.sum, inner_spaces, inner_values);
    stage.sum_bound = inner_sum.bound;

    // h on T_i/(B_i ∪ M_i), then the composite on T_i/M_i.
    std::vector<double> h(inner.quotient.size());
    for (Index c = 0; c < h.size(); ++c) h[c] = inner_sum.values[inner.to_sum[c]];
    stage.sum_q = measure_lightness(inner.quotient.space, h).lightness;

    const QuotientSpace& tm = piece.quotient;  // T_i/M_i
    std::vector<Index> projection(tm.size());
    std::vector<double> composite(tm.size());
    for (Index c = 0; c < tm.size(); ++c) {
      projection[c] = inner.quotient.class_of[tm.representative[c]];
      composite[c] = h[projection[c]];
    }
    composite[0] = 0.0;
    const LightnessReport comp_report = measure_lightness(tm.space, composite);
    stage.composite_q = comp_report.lightness;
    stage.composite_l = comp_report.lipschitz;

    // The collapsed set [B_i ∪ M_i] inside T_i/M_i.
    const IndexSet collapsed_classes = tm.classes(cd.collapsed);
    stage.alpha_star = collapsed_classes.size() < 2
                           ? 1.0
                           : uniform_disconnectedness_constant(tm.space, collapsed_classes);
    const DoublingEstimate doubling = doubling_constant(sub.tree.space());
    stage.doubling = doubling.value;
    stage.doubling_bound = 1.0 / (8.0 * static_cast<double>(doubling.value * doubling.value));
    stage.disconnect_ok = stage.alpha_star >= stage.doubling_bound - kBoundSlack;
    stage.projection = measure_metric_lightness(tm.space, inner.quotient.space, projection);
    stage.projection_bound = 9.0 / stage.alpha_star + 8.0;

    out.stages_pass = out.stages_pass && stage.wreath_ok && stage.disconnect_ok;
    worst_composite = std::max(worst_composite, stage.composite_q);
    outer_spaces.push_back(tm.space);
    outer_values.push_back(std::move(composite));
    out.stages.push_back(std::move(stage));
  }

  const SumMapResult outer = sum_map(pc.sum, outer_spaces, outer_values);
  out.values.assign(pc.quotient.size(), 0.0);
  for (Index c = 0; c < out.values.size(); ++c) out.values[c] = outer.values[pc.to_sum[c]];
  const LightnessReport final_report = measure_lightness(pc.quotient.space, out.values);
  out.l_hat = final_report.lipschitz;
  out.q_hat = final_report.lightness;
  out.final_bound = 2.0 + 2.0 * worst_composite;
  return out;
}

}  // namespace lipquot
