#include "lipquot/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <map>
#include <numeric>

#include "lipquot/builders.hpp"
#include "lipquot/chains.hpp"
#include "lipquot/decomposition.hpp"
#include "lipquot/errors.hpp"
#include "lipquot/freespace.hpp"
#include "lipquot/instances.hpp"
#include "lipquot/lightness.hpp"
#include "lipquot/quotient.hpp"
#include "lipquot/whitney.hpp"

namespace lipquot {

double default_tolerance() {
  if (const char* env = std::getenv("LIPQUOT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v >= 0.0 && std::isfinite(v)) return v;
  }
  return 1e-9;
}

Json config_to_json(const ExperimentConfig& config) {
  Json doc;
  doc["seed"] = config.seed;
  doc["trials"] = config.trials;
  doc["min_n"] = config.min_n;
  doc["max_n"] = config.max_n;
  doc["tags"] = config.tags;
  doc["tolerance"] = config.tolerance;
  return doc;
}

ExperimentConfig config_from_json(const Json& doc) {
  ExperimentConfig config;
  try {
    config.seed = doc.value("seed", config.seed);
    config.trials = doc.value("trials", config.trials);
    config.min_n = doc.value("min_n", config.min_n);
    config.max_n = doc.value("max_n", config.max_n);
    config.tags = doc.value("tags", config.tags);
    config.tolerance = doc.value("tolerance", config.tolerance);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (config.min_n > config.max_n) throw InputError("config: min_n exceeds max_n");
  return config;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Context {
  Rng& rng;
  const ExperimentConfig& config;
  std::size_t trial;
  Json& summary;
  Json& metrics;
  double tol() const { return config.tolerance; }
  std::size_t size(std::size_t floor, std::size_t cap) const {
    const std::size_t hi = std::max(floor, std::min(config.max_n, cap));
    const std::size_t lo = std::min(hi, std::max(floor, config.min_n));
    return uniform_size(rng, lo, hi);
  }
  void metric(const std::string& key, double value) {
    if (!metrics.contains(key) || metrics[key].get<double>() < value) metrics[key] = value;
  }
};

using TrialFn = std::function<bool(Context&)>;

TreeProfile cycle_profile(std::size_t trial, bool all) {
  static const TreeProfile kAll[] = {TreeProfile::geodesic, TreeProfile::snowflake,
                                     TreeProfile::comb, TreeProfile::vicsek};
  return all ? kAll[trial % 4] : kAll[trial % 2];
}

// Nonempty proper subset when n > 1.
IndexSet proper_subset(Rng& rng, std::size_t n, double p) {
  IndexSet s = random_subset(rng, n, p);
  if (s.size() == n && n > 1) s.erase(s.begin() + static_cast<std::ptrdiff_t>(uniform_size(rng, 0, n - 1)));
  return s;
}

bool check_whitney(Context& c) {
  static const double kEps[] = {0.1, 0.25, 0.5};
  const double eps = kEps[c.trial % 3];
  const std::size_t n = c.size(3, 25);
  const FiniteMetricSpace space = random_planar_space(c.rng, n);
  const IndexSet target = proper_subset(c.rng, n, 0.3);
  const IndexSet source = set_difference(all_indices(n), target);
  const WhitneyNet net = whitney_net(space, source, target, eps);
  const WhitneyAudit audit = audit_whitney_net(space, net);
  const WhitneyCoverage cover = whitney_coverage(space, net);
  c.summary["n"] = n;
  c.summary["epsilon"] = eps;
  c.summary["net_size"] = net.net.size();
  c.summary["violations"] = cover.violations;
  c.metric("worst_ratio_over_bound", cover.worst_ratio / net.epsilon_prime());
  return audit.valid() && cover.violations.empty();
}

bool check_double_quotient(Context& c) {
  const std::size_t n = c.size(3, 20);
  const FiniteMetricSpace space = random_planar_space(c.rng, n);
  const IndexSet outer = proper_subset(c.rng, n, 0.5);
  IndexSet inner = random_subset(c.rng, outer.size(), 0.5);
  for (Index& i : inner) i = outer[i];
  const IsometryReport r = double_quotient_check(space, inner, outer, 1e-9);
  c.summary["n"] = n;
  c.summary["inner"] = inner;
  c.summary["outer"] = outer;
  c.metric("max_deviation", r.max_deviation);
  return r.max_deviation < 1e-9;
}

bool check_whitney_iso(Context& c) {
  const std::size_t n = c.size(3, 20);
  const FiniteMetricSpace space = random_planar_space(c.rng, n);
  const IndexSet base = proper_subset(c.rng, n, 0.3);
  const IndexSet other = random_subset(c.rng, n, 0.6);
  const WhitneyNet net = whitney_net(space, other, base, 0.5);
  const WhitneyIsometryReport r = whitney_isometry_check(space, base, other, net, 1e-9);
  c.summary["n"] = n;
  c.summary["base"] = base;
  c.summary["other"] = other;
  c.metric("max_deviation", r.distances.max_deviation);
  return r.passes();
}

bool check_chain_lift(Context& c) {
  static const double kAlpha[] = {0.125, 0.1, 0.0625};
  const double alpha = kAlpha[c.trial % 3];
  const ChainLiftInstance inst = chain_lift_instance(c.rng, alpha);
  const ChainLiftResult r =
      chain_lift(inst.space, inst.source, inst.quotient, inst.chain.indices, alpha);
  c.summary["alpha"] = alpha;
  c.summary["chain"] = inst.chain.indices;
  c.summary["lifted"] = r.lifted.indices;
  c.summary["truncated"] = r.truncated;
  c.metric("span_ratio", r.lifted_span > 0.0 ? r.quotient_span / r.lifted_span : 0.0);
  const bool valid = is_nondegenerate_relative_chain(inst.space, r.lifted.indices, 8.0 * alpha);
  return r.passes() && valid;
}

bool check_uniform(Context& c) {
  const std::size_t n = c.size(4, 40);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, false));
  const BranchDisconnectReport r = branch_uniform_disconnect_check(tree);
  c.summary["n"] = n;
  c.summary["profile"] = to_string(cycle_profile(c.trial, false));
  c.summary["doubling"] = r.doubling;
  c.summary["bound"] = r.bound;
  c.summary["alpha_star"] = r.alpha_star;
  if (r.witness) c.summary["witness_chain"] = r.witness->indices;
  c.metric("bound_over_alpha_star", r.alpha_star > 0.0 ? r.bound / r.alpha_star : 0.0);
  return r.passes;
}

bool check_pre_coproduct(Context& c) {
  const std::size_t n = c.size(4, 40);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const IndexSet marked = random_subset(c.rng, n, 0.2);
  const PreCoproduct pc = pre_coproduct_decompose(tree, marked);
  c.summary["n"] = n;
  c.summary["marked"] = marked;
  c.summary["pieces"] = pc.pieces.size();
  c.summary["min_ratio"] = pc.min_ratio;
  c.summary["max_ratio"] = pc.max_ratio;
  c.metric("one_minus_min_ratio", 1.0 - pc.min_ratio);
  c.metric("max_ratio", pc.max_ratio);
  return pc.passes;
}

bool check_coproduct(Context& c) {
  const std::size_t n = c.size(4, 40);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const IndexSet leaves = tree.leaves();
  IndexSet marked = random_subset(c.rng, leaves.size(), 0.5);
  for (Index& m : marked) m = leaves[m];
  const CoproductDecomposition cd = coproduct_decompose(tree, marked);
  bool ok = cd.comparison.passes;
  std::size_t wreaths = 0;
  for (const CoproductPiece& p : cd.pieces) {
    const std::size_t k = set_intersection(p.component.closure, cd.collapsed).size();
    ok = ok && (k == 1 || k == 2) &&
         (p.kind == (k == 1 ? PieceKind::tree : PieceKind::wreath));
    if (p.kind == PieceKind::wreath) ++wreaths;
  }
  c.summary["n"] = n;
  c.summary["marked"] = marked;
  c.summary["pieces"] = cd.pieces.size();
  c.summary["wreaths"] = wreaths;
  return ok;
}

bool check_quotient_light(Context& c) {
  const double alpha = c.trial % 2 == 0 ? 0.25 : 0.5;
  const std::size_t levels = uniform_size(c.rng, 2, 4);
  const std::size_t extra = uniform_size(c.rng, 4, 16);
  const DisconnectedInstance inst = disconnected_instance(c.rng, alpha, levels, extra);
  const QuotientLightnessReport r = quotient_map_lightness(inst.space, inst.collapsed, alpha);
  c.summary["alpha"] = alpha;
  c.summary["alpha_star"] = r.alpha_star;
  c.summary["q_pi"] = r.projection.lightness;
  c.summary["exact"] = r.projection.exact;
  c.summary["bound"] = r.bound;
  c.summary["beta"] = r.beta;
  if (r.converse_witness) c.summary["converse_witness"] = r.converse_witness->indices;
  c.metric("q_over_bound", r.projection.upper / r.bound);
  return r.passes();
}

bool check_two_piece(Context& c) {
  const std::size_t n = c.size(3, 20);
  const FiniteMetricSpace space = random_planar_space(c.rng, n);
  const Index centre = uniform_size(c.rng, 0, n - 1);
  std::vector<double> values(n);
  for (Index x = 0; x < n; ++x) values[x] = space(centre, x);
  IndexSet first, second;
  for (Index x = 0; x < n; ++x) {
    const std::size_t pick = uniform_size(c.rng, 0, 2);
    if (pick != 1) first.push_back(x);
    if (pick != 0) second.push_back(x);
  }
  const TwoPieceReport r = glue_two_piece_check(space, values, first, second);
  c.summary["n"] = n;
  c.summary["first"] = first;
  c.summary["q_first"] = r.q_first;
  c.summary["q_second"] = r.q_second;
  c.summary["q_union"] = r.q_union;
  c.summary["bound"] = r.bound;
  c.metric("q_over_bound", r.q_union / r.bound);
  return r.q_union <= r.bound + c.tol();
}

bool check_subset_components(Context& c) {
  const std::size_t n = c.size(4, 40);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const IndexSet seeds = random_subset(c.rng, n, 3.0 / static_cast<double>(n));
  const IndexSet subset = hull(tree, seeds);
  const Subtree core = induced_subtree(tree, subset);
  const PieceValues on_subset{subset, tree_map(core.tree)};
  std::vector<PieceValues> pieces;
  for (const TreeComponent& comp : components_minus(tree, subset)) {
    const Subtree sub = induced_subtree(tree, comp.closure);
    const std::vector<double> g = tree_map(sub.tree);
    const Index p = comp.boundary.front();
    const double anchor = on_subset.values[static_cast<std::size_t>(
        std::lower_bound(subset.begin(), subset.end(), p) - subset.begin())];
    const double shift = anchor - g[*sub.local(p)];
    PieceValues piece{comp.closure, std::vector<double>(g.size())};
    for (std::size_t k = 0; k < g.size(); ++k)
      piece.values[k] = sub.to_parent[k] == p ? anchor : g[k] + shift;
    pieces.push_back(std::move(piece));
  }
  const GlueResult glued = glue_subset_components(tree, on_subset, pieces);
  const GlueReport& r = glued.report;
  c.summary["n"] = n;
  c.summary["profile"] = to_string(cycle_profile(c.trial, true));
  c.summary["subset"] = subset;
  c.summary["l0"] = r.l0;
  c.summary["q0"] = r.q0;
  c.summary["l_hat"] = r.l_hat;
  c.summary["q_hat"] = r.q_hat;
  c.summary["chain_neighbourhood_ok"] = r.chain_neighbourhood_ok;
  c.metric("l_over_bound", r.l_bound > 0 ? r.l_hat / r.l_bound : 0.0);
  c.metric("q_over_bound", r.q_bound > 0 ? r.q_hat / r.q_bound : 0.0);
  return r.l_hat <= r.l_bound + c.tol() && r.q_hat <= r.q_bound + c.tol() &&
         r.chain_neighbourhood_ok;
}

std::pair<Index, Index> two_leaves(Rng& rng, const MetricTree& tree) {
  const IndexSet leaves = tree.leaves();
  const std::size_t i = uniform_size(rng, 0, leaves.size() - 1);
  std::size_t j = uniform_size(rng, 0, leaves.size() - 2);
  if (j >= i) ++j;
  return {leaves[i], leaves[j]};
}

bool check_wreath(Context& c) {
  const std::size_t n = c.size(4, 40);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const auto [a, b] = two_leaves(c.rng, tree);
  const WreathMapResult w = wreath_map(tree, a, b);
  c.summary["n"] = n;
  c.summary["leaves"] = {a, b};
  c.summary["q_tree"] = w.q_tree;
  c.summary["q_folded"] = w.q_folded;
  c.summary["q_wreath"] = w.q_wreath;
  c.summary["bound"] = w.bound;
  c.metric("q_over_bound", w.q_wreath / w.bound);
  return w.q_wreath <= w.bound + c.tol() && w.l_folded <= measure_lipschitz(tree.space(), w.tree_values).value + c.tol();
}

bool check_sum_light(Context& c) {
  const std::size_t count = uniform_size(c.rng, 2, 10);
  const std::vector<FiniteMetricSpace> pieces = random_pieces(c.rng, count, 8);
  std::vector<std::vector<double>> values;
  for (const FiniteMetricSpace& p : pieces) {
    const Index centre = uniform_size(c.rng, 0, p.size() - 1);
    std::vector<double> v(p.size());
    for (Index x = 0; x < p.size(); ++x) v[x] = p(centre, x) - p(centre, 0);
    v[0] = 0.0;
    values.push_back(std::move(v));
  }
  const SumSpace s = sum(pieces);
  const SumMapResult r = sum_map(s, pieces, values);
  c.summary["pieces"] = count;
  c.summary["q"] = r.q;
  c.summary["bound"] = r.bound;
  c.summary["bound_is_conjectural"] = true;
  c.metric("q_over_bound", r.q / r.bound);
  return r.q <= r.bound + c.tol();
}

bool check_leaf_extension(Context& c) {
  const std::size_t n = c.size(4, 60);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const IndexSet leaves = tree.leaves();
  const double diam = tree.space().diameter();
  std::vector<double> leaf_values;
  for (std::size_t k = 0; k < leaves.size(); ++k) leaf_values.push_back(uniform_real(c.rng, 0.0, diam));
  const LeafExtension ext = extend_from_leaves(tree, leaf_values);
  bool ok = true;
  for (std::size_t k = 0; k < leaves.size(); ++k) ok = ok && ext.values[leaves[k]] == leaf_values[k];
  for (double v : ext.values) ok = ok && std::isfinite(v);
  const LightnessReport r = measure_lightness(tree.space(), ext.values);
  c.summary["n"] = n;
  c.summary["leaves"] = leaves.size();
  c.summary["gap_repairs"] = ext.gap_repairs;
  c.summary["l_hat"] = r.lipschitz;
  c.summary["q_hat"] = r.lightness;
  c.metric("q_hat", r.lightness);
  c.metric("gap_repairs", static_cast<double>(ext.gap_repairs));
  return ok && std::isfinite(r.lightness);
}

// Direct evaluation of the lightness definition: every window whose lower end
// is a value of f, every critical radius, components by union-find.
bool check_lightness_definition(Context& c) {
  const std::size_t n = c.size(2, 12);
  const FiniteMetricSpace space = random_planar_space(c.rng, n);
  std::vector<double> values(n);
  for (double& v : values) v = uniform_real(c.rng, 0.0, 1.0);
  const LightnessReport r = measure_lightness(space, values);
  std::vector<double> radii;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      radii.push_back(space(a, b));
      if (values[a] != values[b]) radii.push_back(std::abs(values[a] - values[b]));
    }
  double best = 0.0;
  for (double radius : radii) {
    for (double low : values) {
      std::vector<Index> inside;
      for (Index x = 0; x < n; ++x)
        if (values[x] >= low && values[x] - low <= radius) inside.push_back(x);
      for (const IndexSet& comp : delta_components(space, make_index_set(inside), radius))
        best = std::max(best, space.diameter(comp) / radius);
    }
  }
  c.summary["n"] = n;
  c.summary["q_hat"] = r.lightness;
  c.summary["q_direct"] = best;
  c.metric("disagreement", std::abs(best - r.lightness));
  return std::abs(best - r.lightness) <= 1e-9 * std::max(1.0, best);
}

bool finite_values(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

bool check_tree_map(Context& c) {
  const std::size_t n = c.size(4, 150);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const std::vector<double> values = tree_map(tree);
  const LightnessReport r = measure_lightness(tree.space(), values);
  c.summary["n"] = n;
  c.summary["profile"] = to_string(cycle_profile(c.trial, true));
  c.summary["l_hat"] = r.lipschitz;
  c.summary["q_hat"] = r.lightness;
  c.metric("l_hat", r.lipschitz);
  c.metric("q_hat", r.lightness);
  return values.size() == n && finite_values(values) && std::isfinite(r.lightness);
}

bool check_union_map(Context& c) {
  FiniteMetricSpace ambient;
  std::vector<UnionPart> parts;
  if (c.trial == 0) {
    std::tie(ambient, parts) = cusp_instance(100);
    c.summary["instance"] = "cusp";
  } else {
    const std::size_t per = std::max<std::size_t>(3, std::min<std::size_t>(c.config.max_n, 150) / 5);
    UnionInstance inst = random_segment_union(c.rng, uniform_size(c.rng, 2, 4), per);
    ambient = inst.ambient;
    for (const auto& path : inst.paths) {
      UnionPart part;
      part.vertices = make_index_set(path);
      for (std::size_t k = 0; k + 1 < path.size(); ++k) part.edges.emplace_back(path[k], path[k + 1]);
      parts.push_back(std::move(part));
    }
    c.summary["instance"] = "segments";
  }
  const UnionMapResult r = union_map(ambient, parts);
  // Restriction to the first tree must be its stand-alone map.
  const IndexSet& first = parts.front().vertices;
  std::vector<Edge> local;
  for (const auto& [a, b] : parts.front().edges)
    local.emplace_back(std::lower_bound(first.begin(), first.end(), a) - first.begin(),
                       std::lower_bound(first.begin(), first.end(), b) - first.begin());
  const std::vector<double> alone = tree_map(MetricTree(ambient.subspace(first), local));
  bool same = true;
  for (std::size_t k = 0; k < first.size(); ++k) same = same && r.values[first[k]] == alone[k];
  c.summary["n"] = ambient.size();
  c.summary["parts"] = parts.size();
  c.summary["l_hat"] = r.l_hat;
  c.summary["q_hat"] = r.q_hat;
  Json stages = Json::array();
  for (const UnionStage& s : r.stages) {
    Json st;
    st["shared"] = s.shared;
    st["two_piece"] = {s.two_piece.q_union, s.two_piece.bound};
    if (s.glue) st["glue"] = {s.glue->l_hat, s.glue->l_bound, s.glue->q_hat, s.glue->q_bound};
    stages.push_back(std::move(st));
  }
  c.summary["stages"] = std::move(stages);
  c.metric("q_hat", r.q_hat);
  return r.passes && same && finite_values(r.values) && std::isfinite(r.q_hat);
}

bool check_quotient_tree(Context& c) {
  const std::size_t n = c.size(4, 150);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const IndexSet marked = c.trial % 3 == 0 ? random_subset(c.rng, n, 0.1) : [&] {
    const IndexSet leaves = tree.leaves();
    IndexSet m = random_subset(c.rng, leaves.size(), 0.4);
    for (Index& i : m) i = leaves[i];
    return m;
  }();
  const QuotientTreeMapResult r = quotient_tree_map(tree, marked);
  bool ok = r.stages_pass && finite_values(r.values) && r.values[0] == 0.0 &&
            std::isfinite(r.q_hat);
  Json stages = Json::array();
  for (const PieceStage& s : r.stages) {
    Json st;
    st["vertices"] = s.vertices;
    st["tree_pieces"] = s.tree_pieces;
    st["wreath_pieces"] = s.wreath_pieces;
    st["sum_q"] = s.sum_q;
    st["alpha_star"] = s.alpha_star;
    st["doubling_bound"] = s.doubling_bound;
    st["projection_q"] = {s.projection.lower, s.projection.upper};
    st["projection_bound"] = s.projection_bound;
    st["composite_q"] = s.composite_q;
    stages.push_back(std::move(st));
  }
  c.summary["n"] = n;
  c.summary["profile"] = to_string(cycle_profile(c.trial, true));
  c.summary["marked"] = marked;
  c.summary["stages"] = std::move(stages);
  c.summary["l_hat"] = r.l_hat;
  c.summary["q_hat"] = r.q_hat;
  c.metric("q_hat", r.q_hat);
  return ok;
}

FiniteMetricSpace based_space(Context& c, std::size_t cap) {
  const std::size_t n = c.size(2, cap);
  return random_planar_space(c.rng, n).with_basepoint(uniform_size(c.rng, 0, n - 1));
}

bool check_free_norm(Context& c) {
  const FiniteMetricSpace space = based_space(c, 12);
  const std::size_t n = space.size();
  const FreeVector mu = random_free_vector(c.rng, n);
  const FreeNormResult r = free_norm_detailed(space, mu);
  double embed = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y)
      embed = std::max(embed, std::abs(free_norm(space, make_free_vector({x, y}, {1.0, -1.0}, n)) -
                                       space(x, y)));
  FreeVector scaled = mu;
  for (double& v : scaled.coeffs) v *= 3.0;
  const double homogeneity = std::abs(free_norm(space, scaled) - 3.0 * r.primal);
  c.summary["n"] = n;
  c.summary["primal"] = r.primal;
  c.summary["dual"] = r.dual;
  c.metric("gap", r.gap);
  c.metric("embedding_error", embed);
  c.metric("homogeneity_error", homogeneity);
  return r.gap <= kDualityGap && embed <= 1e-9 && homogeneity <= 1e-9;
}

bool check_quotient_duality(Context& c) {
  const FiniteMetricSpace space = based_space(c, 12);
  const IndexSet subset = random_subset(c.rng, space.size(), 0.3);
  const FreeVector mu = random_free_vector(c.rng, space.size());
  const QuotientDualityReport r = quotient_duality_check(space, subset, mu);
  c.summary["n"] = space.size();
  c.summary["subset"] = subset;
  c.summary["constrained"] = r.constrained;
  c.summary["quotient_norm"] = r.quotient_norm;
  c.metric("gap", r.gap);
  return r.passes;
}

bool check_sum_decomposition(Context& c) {
  const std::size_t count = uniform_size(c.rng, 2, 4);
  const std::vector<FiniteMetricSpace> pieces = random_pieces(c.rng, count, 4);
  const SumSpace s = sum(pieces);
  const FreeVector mu = random_free_vector(c.rng, s.size());
  const SumDecompositionReport r = sum_decomposition_check(s, mu);
  c.summary["pieces"] = count;
  c.summary["whole"] = r.whole;
  c.summary["piece_total"] = r.piece_total;
  c.metric("gap", r.gap);
  return r.passes;
}

bool check_rational(Context& c) {
  const std::size_t n = c.size(2, 8);
  const FiniteMetricSpace space =
      random_integer_space(c.rng, n).with_basepoint(uniform_size(c.rng, 0, n - 1));
  const FreeVector mu = random_free_vector(c.rng, n, true);
  const Rational flow = free_norm_flow_exact(space, mu);
  const Rational lp = constrained_dual_norm_exact(space, mu, IndexSet{*space.basepoint()});
  const IndexSet subset = random_subset(c.rng, n, 0.3);
  const ExactQuotientDuality qd = quotient_duality_exact(space, subset, mu);
  const std::vector<FiniteMetricSpace> pieces = random_pieces(c.rng, uniform_size(c.rng, 2, 3), 3, true);
  const SumSpace s = sum(pieces);
  const ExactSumDecomposition sd = sum_decomposition_exact(s, random_free_vector(c.rng, s.size(), true));
  c.summary["n"] = n;
  c.summary["norm"] = flow.str();
  c.summary["primal_equals_dual"] = flow == lp;
  c.summary["quotient_duality_exact"] = qd.equal;
  c.summary["sum_decomposition_exact"] = sd.equal;
  return flow == lp && qd.equal && sd.equal;
}

bool check_bilipschitz(Context& c) {
  const std::size_t n = c.size(4, 30);
  const MetricTree tree = random_tree(c.rng, n, cycle_profile(c.trial, true));
  const IndexSet marked = random_subset(c.rng, n, 0.2);
  const PreCoproduct pc = pre_coproduct_decompose(tree, marked);
  const FreeVector mu = random_free_vector(c.rng, pc.quotient.size());
  const BiLipschitzNormReport r =
      bilipschitz_norm_comparison(pc.quotient.space, pc.sum.space.with_basepoint(0), pc.to_sum, mu, 2.0);
  c.summary["n"] = n;
  c.summary["marked"] = marked;
  c.summary["ratio"] = r.ratio;
  c.summary["distortion"] = {r.lower, r.upper};
  c.metric("ratio", r.ratio);
  c.metric("inverse_ratio", r.ratio > 0 ? 1.0 / r.ratio : 0.0);
  return r.passes();
}

const std::map<std::string, TrialFn>& registry() {
  static const std::map<std::string, TrialFn> table{
      {"whitney", check_whitney},
      {"doublequotient", check_double_quotient},
      {"whitneyiso", check_whitney_iso},
      {"chainlift", check_chain_lift},
      {"uniform", check_uniform},
      {"precoproduct", check_pre_coproduct},
      {"coproduct", check_coproduct},
      {"quotientlight", check_quotient_light},
      {"twopiece", check_two_piece},
      {"subsetcomponents", check_subset_components},
      {"wreath", check_wreath},
      {"sumlight", check_sum_light},
      {"leafext", check_leaf_extension},
      {"liplightdef", check_lightness_definition},
      {"treemap", check_tree_map},
      {"unionmap", check_union_map},
      {"quotienttree", check_quotient_tree},
      {"freenorm", check_free_norm},
      {"quotientduality", check_quotient_duality},
      {"sumdecomposition", check_sum_decomposition},
      {"rational", check_rational},
      {"bilipschitz", check_bilipschitz},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_tags() {
  static const std::vector<std::string> tags = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return tags;
}

bool is_suite_tag(const std::string& tag) { return registry().count(tag) != 0; }

TrialResult run_trial(const std::string& tag, const ExperimentConfig& config, std::size_t trial) {
  const auto it = registry().find(tag);
  if (it == registry().end()) throw InputError("unknown lemma tag \"" + tag + "\"");
  TrialResult result;
  result.tag = tag;
  result.trial = trial;
  result.seed = config.seed + trial;
  result.summary = Json::object();
  result.metrics = Json::object();
  Rng rng(result.seed);
  Context context{rng, config, trial, result.summary, result.metrics};
  try {
    result.passed = it->second(context);
  } catch (const std::exception& e) {
    result.passed = false;
    result.summary["error"] = e.what();
  }
  return result;
}

SuiteReport run_suite(const ExperimentConfig& config) {
  for (const std::string& tag : config.tags)
    if (!is_suite_tag(tag)) throw InputError("unknown lemma tag \"" + tag + "\"");

  SuiteReport report;
  Json& doc = report.document;
  doc["tool"] = "lipquot";
  doc["version"] = kToolVersion;
  doc["schema_version"] = kSchemaVersion;
  doc["seed"] = config.seed;
  doc["config"] = config_to_json(config);
  doc["config_hash"] = config_hash(config);
  Json tags = Json::object();

  for (const std::string& tag : config.tags) {
    std::vector<TrialResult> results(config.trials);
    const unsigned workers = std::max(1u, config.threads);
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t t = w; t < config.trials; t += workers) results[t] = run_trial(tag, config, t);
      }));
    }
    for (auto& j : jobs) j.get();

    Json entry;
    std::size_t failed = 0;
    Json worst = Json::object();
    Json failures = Json::array();
    for (const TrialResult& r : results) {
      for (const auto& [key, value] : r.metrics.items())
        if (!worst.contains(key) || worst[key].get<double>() < value.get<double>()) worst[key] = value;
      if (!r.passed) {
        ++failed;
        Json witness;
        witness["tag"] = tag;
        witness["trial"] = r.trial;
        witness["seed"] = r.seed;
        witness["config"] = config_to_json(config);
        witness["summary"] = r.summary;
        failures.push_back(std::move(witness));
      }
    }
    entry["trials"] = config.trials;
    entry["passed"] = config.trials - failed;
    entry["failed"] = failed;
    entry["worst"] = std::move(worst);
    entry["failures"] = std::move(failures);
    tags[tag] = std::move(entry);
    report.failures += failed;
  }
  doc["tags"] = std::move(tags);
  report.passed = report.failures == 0;
  doc["passed"] = report.passed;
  return report;
}

TrialResult replay(const Json& witness) {
  if (!witness.contains("tag") || !witness.contains("trial") || !witness.contains("config"))
    throw InputError("replay: witness needs \"tag\", \"trial\" and \"config\"");
  const ExperimentConfig config = config_from_json(witness.at("config"));
  return run_trial(witness.at("tag").get<std::string>(), config,
                   witness.at("trial").get<std::size_t>());
}

}  // namespace lipquot
