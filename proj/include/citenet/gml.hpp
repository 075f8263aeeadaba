#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "citenet/graph.hpp"

namespace citenet {

/// Gephi-readable GML. Nodes carry their string id as `label` and a dense
/// integer `id`; attribute keys must match [A-Za-z][A-Za-z0-9_]* and avoid the
/// structural keys. Strings escape `"` by doubling it. Throws
/// SerializationError naming the node and key of any attribute that cannot
/// be represented (bad key or non-finite number).
std::string to_gml(const Graph& graph);
void write_gml(const Graph& graph, const std::filesystem::path& path);

/// Inverse of to_gml. Also accepts GML without labels (the id becomes the
/// node id), nested attribute lists (ignored), `#` comment lines and numeric or
/// named character entities in strings. Throws
/// DecodeError on malformed input.
Graph parse_gml(std::string_view text);
Graph read_gml(const std::filesystem::path& path);

bool is_gml_safe_key(std::string_view key);

} // namespace citenet
