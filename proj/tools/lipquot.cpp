// lipquot: command-line front end. Every input and output is JSON.
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lipquot/builders.hpp"
#include "lipquot/chains.hpp"
#include "lipquot/errors.hpp"
#include "lipquot/freespace.hpp"
#include "lipquot/harness.hpp"
#include "lipquot/instances.hpp"
#include "lipquot/json_io.hpp"
#include "lipquot/lightness.hpp"
#include "lipquot/metric_space.hpp"
#include "lipquot/quotient.hpp"
#include "lipquot/tree.hpp"
#include "lipquot/tree_gen.hpp"

using namespace lipquot;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

void emit(const Json& doc, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << doc.dump(2) << '\n';
  else
    write_json_file(out, doc);
}

void require_valid(const FiniteMetricSpace& space, const std::string& where) {
  const ValidationReport r = validate_metric(space);
  if (r.valid()) return;
  std::ostringstream msg;
  msg << where << ": not a metric";
  if (!r.diagonal.empty()) msg << "; nonzero diagonal at " << r.diagonal.front().i;
  if (!r.symmetry.empty()) msg << "; asymmetric at (" << r.symmetry.front().i << "," << r.symmetry.front().j << ")";
  if (!r.positivity.empty()) msg << "; nonpositive distance at (" << r.positivity.front().i << "," << r.positivity.front().j << ")";
  if (!r.triangle.empty())
    msg << "; triangle inequality fails at (" << r.triangle.front().i << "," << r.triangle.front().j << ","
        << r.triangle.front().k << ")";
  throw InputError(msg.str());
}

FiniteMetricSpace load_space(const std::string& path) {
  const Json doc = read_json_file(path);
  // A tree file is accepted wherever a space is.
  FiniteMetricSpace space = doc.contains("edges") ? tree_from_json(doc).space() : space_from_json(doc);
  require_valid(space, path);
  return space;
}

MetricTree load_tree(const std::string& path) {
  MetricTree tree = tree_from_json(read_json_file(path));
  require_valid(tree.space(), path);
  return tree;
}

// A subset given inline as "0,3,5" or as a JSON file holding an array.
IndexSet parse_subset(const std::string& text, std::size_t n) {
  if (text.empty()) return {};
  if (text.find_first_not_of("0123456789, ") == std::string::npos) {
    std::vector<Index> raw;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
      if (!item.empty()) raw.push_back(std::stoull(item));
    return index_set_from_json(Json(raw), n);
  }
  const Json doc = read_json_file(text);
  return index_set_from_json(doc.is_object() && doc.contains("subset") ? doc.at("subset") : doc, n);
}

Json map_document(const FiniteMetricSpace& space, std::vector<double> values, const std::string& ref) {
  ScalarMap map{ref, std::move(values)};
  Json doc = map_to_json(map);
  doc["lightness"] = lightness_to_json(measure_lightness(space, map.values));
  return doc;
}

int run_report(const SuiteReport& report, const std::string& out) {
  emit(report.document, out);
  return report.passed ? kExitPass : kExitFail;
}

int cmd_replay(const std::string& path, const std::string& out) {
  const Json doc = read_json_file(path);
  std::vector<Json> witnesses;
  if (doc.contains("tags")) {
    for (const auto& [tag, entry] : doc.at("tags").items())
      for (const Json& w : entry.at("failures")) witnesses.push_back(w);
  } else {
    witnesses.push_back(doc);
  }
  Json results = Json::array();
  bool all_passed = true;
  for (const Json& w : witnesses) {
    const TrialResult r = replay(w);
    Json item;
    item["tag"] = r.tag;
    item["trial"] = r.trial;
    item["seed"] = r.seed;
    item["passed"] = r.passed;
    item["summary"] = r.summary;
    item["metrics"] = r.metrics;
    results.push_back(std::move(item));
    all_passed = all_passed && r.passed;
  }
  Json doc_out;
  doc_out["tool"] = "lipquot";
  doc_out["version"] = kToolVersion;
  doc_out["replayed"] = std::move(results);
  doc_out["passed"] = all_passed;
  emit(doc_out, out);
  return all_passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz light maps, metric quotients and free-space norms on finite metric spaces"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("-o,--out", out, "Output file (default: stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random tree or planar point set");
  std::size_t gen_n = 16;
  std::uint64_t gen_seed = 1;
  std::string gen_profile = "geodesic", gen_kind = "tree";
  double gen_s = 0.5;
  bool gen_remetrize = false;
  gen->add_option("--n", gen_n, "Number of vertices")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--profile", gen_profile, "geodesic, snowflake, comb or vicsek");
  gen->add_option("--snowflake-s", gen_s, "Snowflake exponent in (0,1]");
  gen->add_option("--kind", gen_kind, "tree or planar")->check(CLI::IsMember({"tree", "planar"}));
  gen->add_flag("--remetrize", gen_remetrize, "Replace the metric by the 1-bounded-turning one when needed");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Measure a space or tree");
  std::string an_input, an_subset;
  std::size_t an_exact = 20;
  analyze->add_option("input", an_input, "Space or tree JSON")->required();
  analyze->add_option("--subset", an_subset, "Subset for the disconnectedness constant");
  analyze->add_option("--exact-limit", an_exact, "Largest size for the exact doubling search");

  // quotient
  auto* quot = app.add_subcommand("quotient", "Collapse a subset to one point, or wedge spaces together");
  std::string q_space, q_subset;
  std::vector<std::string> q_pieces;
  quot->add_option("--space", q_space, "Space JSON");
  quot->add_option("--subset", q_subset, "Collapsed set: comma list or JSON array file");
  quot->add_option("--sum", q_pieces, "Based spaces to join at their basepoints");

  // build-map
  auto* build = app.add_subcommand("build-map", "Build a light map");
  std::string b_kind, b_tree, b_space, b_parts, b_marked;
  std::vector<Index> b_ends;
  double b_a = 0.0;
  std::optional<double> b_b;
  bool b_cusp = false;
  build->add_option("--kind", b_kind, "arc, tree, wreath, union or quotient")
      ->required()
      ->check(CLI::IsMember({"arc", "tree", "wreath", "union", "quotient"}));
  build->add_option("--tree", b_tree, "Tree JSON");
  build->add_option("--a", b_a, "arc: value at the first endpoint");
  build->add_option("--b", b_b, "arc: value at the last endpoint (default: a + diameter)");
  build->add_option("--leaves", b_ends, "wreath: the two collapsed leaves")->expected(2);
  build->add_option("--space", b_space, "union: ambient space JSON");
  build->add_option("--parts", b_parts, "union: JSON {\"parts\":[{\"vertices\":[],\"edges\":[]}]}");
  build->add_flag("--cusp", b_cusp, "union: use the built-in 200-point cusp");
  build->add_option("--marked", b_marked, "quotient: collapsed set M");

  // freenorm
  auto* fn = app.add_subcommand("freenorm", "Free-space norm of a finitely supported measure");
  std::string f_space, f_mu, f_subset;
  bool f_exact = false;
  fn->add_option("--space", f_space, "Based space JSON")->required();
  fn->add_option("--mu", f_mu, "FreeVector JSON")->required();
  fn->add_option("--subset", f_subset, "Also compute the norm with f vanishing on this set");
  fn->add_flag("--exact", f_exact, "Rational arithmetic");

  // verify-lemma / report / replay
  ExperimentConfig config;
  config.tolerance = default_tolerance();
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Base seed");
    sub->add_option("--trials", config.trials, "Trials per tag");
    sub->add_option("--min-n", config.min_n, "Smallest instance size");
    sub->add_option("--max-n", config.max_n, "Largest instance size");
    sub->add_option("--tol", config.tolerance, "Slack on measured inequalities (default $LIPQUOT_TOL or 1e-9)");
    sub->add_option("--threads", config.threads, "Worker threads");
  };
  auto* verify = app.add_subcommand("verify-lemma", "Run the randomized checks for one or more tags");
  verify->add_option("tags", config.tags, "Check tags")->required();
  add_config(verify);

  auto* report = app.add_subcommand("report", "Run a suite from a config file or flags");
  std::string r_config, r_replay;
  std::vector<std::string> r_tags;
  bool r_all = false;
  report->add_option("--config", r_config, "ExperimentConfig JSON");
  report->add_option("--tags", r_tags, "Check tags");
  report->add_flag("--all", r_all, "Every known tag");
  report->add_option("--replay", r_replay, "Replay a failure witness or every failure of a report");
  report->add_flag_callback("--list", [] {
    for (const std::string& t : suite_tags()) std::cout << t << '\n';
    std::exit(kExitPass);
  }, "List the known tags");
  add_config(report);

  auto* rep = app.add_subcommand("replay", "Replay a failure witness or every failure of a report");
  std::string rp_file;
  rep->add_option("witness", rp_file, "Witness or report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*gen) {
      if (gen_kind == "planar") {
        Rng rng(gen_seed);
        emit(space_to_json(random_planar_space(rng, gen_n)), out);
        return kExitPass;
      }
      TreeGenOptions options;
      options.profile = parse_tree_profile(gen_profile);
      options.snowflake_s = gen_s;
      MetricTree tree = gen_tree(gen_n, gen_seed, options);
      if (gen_remetrize && bounded_turning_constant(tree) > 1.0 + 1e-9) tree = remetrize_1bt(tree);
      emit(tree_to_json(tree), out);
      return kExitPass;
    }

    if (*analyze) {
      const Json doc = read_json_file(an_input);
      const bool is_tree = doc.contains("edges");
      std::optional<MetricTree> tree;
      FiniteMetricSpace space;
      if (is_tree) {
        tree = load_tree(an_input);
        space = tree->space();
      } else {
        space = load_space(an_input);
      }
      Json result;
      result["kind"] = is_tree ? "tree" : "space";
      result["size"] = space.size();
      result["diameter"] = space.diameter();
      const DoublingEstimate d = doubling_constant(space, an_exact);
      result["doubling"] = {{"value", d.value}, {"exact", d.exact}, {"center", d.center}, {"radius", d.radius}};
      if (tree) {
        const TurningReport t = bounded_turning(*tree);
        result["bounded_turning"] = {{"value", t.value}, {"pair", {t.u, t.v}}};
        result["leaves"] = tree->leaves();
        result["branch_points"] = tree->branch_points();
      }
      if (!an_subset.empty()) {
        const IndexSet subset = parse_subset(an_subset, space.size());
        const DisconnectednessReport u = uniform_disconnectedness(space, subset);
        result["uniform_disconnectedness"] = {
            {"alpha_star", u.value}, {"pair", {u.x, u.y}}, {"bottleneck", u.bottleneck}};
      }
      emit(result, out);
      return kExitPass;
    }

    if (*quot) {
      if (!q_pieces.empty()) {
        std::vector<FiniteMetricSpace> pieces;
        for (const std::string& p : q_pieces) pieces.push_back(load_space(p));
        const SumSpace s = sum(pieces);
        Json doc = space_to_json(s.space);
        doc["pieces"] = s.embed;
        emit(doc, out);
        return kExitPass;
      }
      if (q_space.empty() || q_subset.empty()) throw InputError("quotient: need --space and --subset, or --sum");
      const FiniteMetricSpace space = load_space(q_space);
      const QuotientSpace q = quotient(space, parse_subset(q_subset, space.size()));
      Json doc = space_to_json(q.space);
      doc["collapsed"] = q.collapsed;
      doc["class_of"] = q.class_of;
      emit(doc, out);
      return kExitPass;
    }

    if (*build) {
      if (b_kind == "union") {
        FiniteMetricSpace ambient;
        std::vector<UnionPart> parts;
        if (b_cusp) {
          std::tie(ambient, parts) = cusp_instance();
        } else {
          if (b_space.empty() || b_parts.empty()) throw InputError("build-map union: need --space and --parts, or --cusp");
          ambient = load_space(b_space);
          const Json doc = read_json_file(b_parts);
          for (const Json& p : doc.at("parts")) {
            UnionPart part;
            part.vertices = index_set_from_json(p.at("vertices"), ambient.size());
            for (const Json& e : p.at("edges")) part.edges.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>());
            parts.push_back(std::move(part));
          }
        }
        const UnionMapResult r = union_map(ambient, parts);
        Json doc = map_document(ambient, r.values, b_cusp ? "cusp" : b_space);
        doc["stages_pass"] = r.passes;
        emit(doc, out);
        return r.passes ? kExitPass : kExitFail;
      }
      if (b_tree.empty()) throw InputError("build-map " + b_kind + ": need --tree");
      const MetricTree tree = load_tree(b_tree);
      if (b_kind == "arc") {
        const double b = b_b ? *b_b : b_a + tree.space().diameter();
        emit(map_document(tree.space(), build_arc_map(tree, b_a, b), b_tree), out);
      } else if (b_kind == "tree") {
        emit(map_document(tree.space(), tree_map(tree), b_tree), out);
      } else if (b_kind == "wreath") {
        if (b_ends.size() != 2) throw InputError("build-map wreath: need --leaves a b");
        const WreathMapResult w = wreath_map(tree, b_ends[0], b_ends[1]);
        Json doc = map_to_json(ScalarMap{b_tree, w.values});
        doc["class_of"] = w.quotient.class_of;
        doc["Q_tree"] = w.q_tree;
        doc["Q_folded"] = w.q_folded;
        doc["Q_wreath"] = w.q_wreath;
        doc["bound"] = w.bound;
        emit(doc, out);
        return w.passes ? kExitPass : kExitFail;
      } else {
        const IndexSet marked = parse_subset(b_marked, tree.size());
        if (marked.empty()) throw InputError("build-map quotient: need --marked");
        const QuotientTreeMapResult r = quotient_tree_map(tree, marked);
        Json doc = map_to_json(ScalarMap{b_tree, r.values});
        doc["class_of"] = r.decomposition.quotient.class_of;
        doc["L_hat"] = r.l_hat;
        doc["Q_hat"] = r.q_hat;
        doc["stages_pass"] = r.stages_pass;
        emit(doc, out);
        return r.stages_pass ? kExitPass : kExitFail;
      }
      return kExitPass;
    }

    if (*fn) {
      const FiniteMetricSpace space = load_space(f_space);
      if (!space.basepoint()) throw InputError("freenorm: the space needs a basepoint");
      const FreeVector mu = free_vector_from_json(read_json_file(f_mu), space.size());
      Json doc;
      if (f_exact) {
        doc["norm"] = free_norm_flow_exact(space, mu).str();
      } else {
        const FreeNormResult r = free_norm_detailed(space, mu);
        doc["norm"] = r.primal;
        doc["dual"] = r.dual;
        doc["gap"] = r.gap;
        doc["potential"] = r.potential;
      }
      if (!f_subset.empty()) {
        const IndexSet subset = parse_subset(f_subset, space.size());
        if (f_exact) {
          doc["constrained_norm"] = constrained_dual_norm_exact(space, mu, subset).str();
        } else {
          const QuotientDualityReport q = quotient_duality_check(space, subset, mu);
          doc["constrained_norm"] = q.constrained;
          doc["quotient_norm"] = q.quotient_norm;
          doc["quotient_gap"] = q.gap;
        }
      }
      emit(doc, out);
      return kExitPass;
    }

    if (*verify) return run_report(run_suite(config), out);

    if (*report) {
      if (!r_replay.empty()) return cmd_replay(r_replay, out);
      if (!r_config.empty()) {
        const unsigned threads = config.threads;
        config = config_from_json(read_json_file(r_config));
        config.threads = threads;
      }
      if (r_all) config.tags = suite_tags();
      else if (!r_tags.empty()) config.tags = r_tags;
      return run_report(run_suite(config), out);
    }

    if (*rep) return cmd_replay(rp_file, out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitPass;
}
