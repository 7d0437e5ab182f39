#include "lipquot/json_io.hpp"

#include <fstream>
#include <sstream>

#include "lipquot/errors.hpp"

namespace lipquot {

namespace {

void check_version(const Json& doc, const char* kind) {
  if (!doc.is_object()) throw InputError(std::string(kind) + ": expected a JSON object");
  if (!doc.contains("schema_version")) return;
  const Json& v = doc.at("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw InputError(std::string(kind) + ": schema version " + v.dump() + " is not supported (this build reads version " +
                     std::to_string(kSchemaVersion) + ")");
}

const Json& field(const Json& doc, const char* name, const char* kind) {
  if (!doc.contains(name))
    throw InputError(std::string(kind) + ": missing field \"" + name + "\"");
  return doc.at(name);
}

template <class T>
T get_as(const Json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json stamped(const char* kind) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind;
  return doc;
}

}  // namespace

Json space_to_json(const FiniteMetricSpace& space) {
  Json doc = stamped("space");
  doc["points"] = space.ids();
  Json rows = Json::array();
  for (Index i = 0; i < space.size(); ++i)
    rows.push_back(std::vector<double>(space.row(i).begin(), space.row(i).end()));
  doc["dist"] = std::move(rows);
  doc["basepoint"] = space.basepoint() ? Json(*space.basepoint()) : Json(nullptr);
  return doc;
}

FiniteMetricSpace space_from_json(const Json& doc) {
  check_version(doc, "space");
  const Json& dist = field(doc, "dist", "space");
  if (!dist.is_array()) throw InputError("space: \"dist\" must be an array of rows");
  const std::size_t n = dist.size();
  std::vector<std::string> ids;
  if (doc.contains("points")) {
    for (const Json& p : doc.at("points")) ids.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    if (ids.size() != n)
      throw InputError("space: " + std::to_string(ids.size()) + " point ids but " +
                       std::to_string(n) + " distance rows");
  } else {
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = get_as<std::vector<double>>(dist[i], "space: row " + std::to_string(i));
    if (row.size() != n)
      throw InputError("space: row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(n));
    flat.insert(flat.end(), row.begin(), row.end());
  }
  std::optional<Index> base;
  if (doc.contains("basepoint") && !doc.at("basepoint").is_null())
    base = get_as<Index>(doc.at("basepoint"), "space: basepoint");
  return FiniteMetricSpace(std::move(ids), std::move(flat), base);
}

Json tree_to_json(const MetricTree& tree) {
  Json doc = stamped("tree");
  Json space = space_to_json(tree.space());
  space.erase("schema_version");
  doc["space"] = std::move(space);
  Json edges = Json::array();
  for (const auto& [u, v] : tree.edges()) edges.push_back({u, v});
  doc["edges"] = std::move(edges);
  doc["declared_C"] = tree.declared_C() ? Json(*tree.declared_C()) : Json(nullptr);
  doc["declared_D"] = tree.declared_D() ? Json(*tree.declared_D()) : Json(nullptr);
  return doc;
}

MetricTree tree_from_json(const Json& doc) {
  check_version(doc, "tree");
  FiniteMetricSpace space = space_from_json(field(doc, "space", "tree"));
  std::vector<Edge> edges;
  for (const Json& e : field(doc, "edges", "tree")) {
    const auto pair = get_as<std::vector<Index>>(e, "tree: edge");
    if (pair.size() != 2) throw InputError("tree: every edge needs two endpoints");
    edges.emplace_back(pair[0], pair[1]);
  }
  auto optional_number = [&](const char* name) -> std::optional<double> {
    if (!doc.contains(name) || doc.at(name).is_null()) return std::nullopt;
    return get_as<double>(doc.at(name), std::string("tree: ") + name);
  };
  return MetricTree(std::move(space), std::move(edges), optional_number("declared_C"),
                    optional_number("declared_D"));
}

Json map_to_json(const ScalarMap& map) {
  Json doc = stamped("map");
  doc["domain_ref"] = map.domain_ref;
  doc["values"] = map.values;
  return doc;
}

ScalarMap map_from_json(const Json& doc) {
  check_version(doc, "map");
  ScalarMap map;
  if (doc.contains("domain_ref")) map.domain_ref = get_as<std::string>(doc.at("domain_ref"), "map: domain_ref");
  map.values = get_as<std::vector<double>>(field(doc, "values", "map"), "map: values");
  return map;
}

Json free_vector_to_json(const FreeVector& mu) {
  Json doc = stamped("free_vector");
  doc["support"] = mu.support;
  doc["coeffs"] = mu.coeffs;
  return doc;
}

FreeVector free_vector_from_json(const Json& doc, std::size_t space_size) {
  check_version(doc, "free_vector");
  return make_free_vector(
      get_as<std::vector<Index>>(field(doc, "support", "free_vector"), "free_vector: support"),
      get_as<std::vector<double>>(field(doc, "coeffs", "free_vector"), "free_vector: coeffs"),
      space_size);
}

Json lightness_to_json(const LightnessReport& report) {
  Json doc;
  doc["L_hat"] = report.lipschitz;
  doc["Q_hat"] = report.lightness;
  Json w;
  w["radius"] = report.witness.radius;
  w["window"] = {report.witness.window_low, report.witness.window_low + report.witness.radius};
  w["component"] = report.witness.component;
  w["diameter_pair"] = {report.witness.a, report.witness.b};
  w["diameter"] = report.witness.diameter;
  doc["witness"] = std::move(w);
  return doc;
}

IndexSet index_set_from_json(const Json& doc, std::size_t space_size) {
  const auto raw = get_as<std::vector<Index>>(doc, "index set");
  for (Index i : raw)
    if (i >= space_size) throw InputError("index set: index " + std::to_string(i) + " out of range");
  return make_index_set(raw);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": parse error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace lipquot
