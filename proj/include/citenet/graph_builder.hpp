#pragma once

#include <filesystem>
#include <optional>

#include "citenet/corpus.hpp"
#include "citenet/graph.hpp"

namespace citenet {

/// Directed citation graph, edges citing -> cited. Root works become nodes
/// first; each root work contributes edges from its cited_by list and to its
/// cite list. With `baseset` false only root-to-root edges are kept; with it
/// true the neighbouring base works join as nodes (dangling ids become nodes
/// with sparse attributes). Reciprocal listings collapse to one edge.
///
/// Node attributes: title, publication_date, is_root, citation_count, type,
/// language, venue, topics ("; "-joined) and the primary topic at each level
/// (topic, subfield, field, domain).
Graph create_citation_graph(const Corpus& corpus, bool baseset,
                            const std::optional<std::filesystem::path>& out_path = std::nullopt);

/// Undirected co-authorship graph weighted by the number of shared works.
/// Root works always contribute; with `baseset` each root work's citing and
/// cited neighbours contribute once each. Authors are deduplicated within a
/// work and self-pairs are never added.
///
/// Node attributes: display_name, country.
Graph create_coauthorship_graph(const Corpus& corpus, bool baseset,
                                const std::optional<std::filesystem::path>& out_path = std::nullopt);

/// Builds the node attributes a citation graph attaches to `work`.
Attributes citation_node_attrs(const Work& work);

} // namespace citenet
