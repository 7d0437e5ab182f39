#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"  // vendored nlohmann/json

#include "lipquot/freespace.hpp"
#include "lipquot/lightness.hpp"
#include "lipquot/metric_space.hpp"
#include "lipquot/tree.hpp"

namespace lipquot {

using Json = nlohmann::ordered_json;

// Version stamped into every exported document. Documents carrying another
// version are rejected; documents without one are read as current.
inline constexpr int kSchemaVersion = 1;

// {"schema_version", "kind": "space", "points": [ids], "dist": [[...]], "basepoint": i|null}
Json space_to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const Json& doc);

// {"kind": "tree", "space": {...}, "edges": [[u,v]...], "declared_C", "declared_D"}
Json tree_to_json(const MetricTree& tree);
MetricTree tree_from_json(const Json& doc);

// {"kind": "map", "domain_ref": "...", "values": [...]}
Json map_to_json(const ScalarMap& map);
ScalarMap map_from_json(const Json& doc);

// {"kind": "free_vector", "support": [...], "coeffs": [...]}
Json free_vector_to_json(const FreeVector& mu);
FreeVector free_vector_from_json(const Json& doc, std::size_t space_size);

Json lightness_to_json(const LightnessReport& report);

// Index set as a JSON array of indices, validated against a size.
IndexSet index_set_from_json(const Json& doc, std::size_t space_size);

// Throws InputError naming the file and the parse position.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

}  // namespace lipquot
