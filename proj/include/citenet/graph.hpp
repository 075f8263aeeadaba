#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace citenet {

using AttrValue = std::variant<std::int64_t, double, std::string>;
/// Ordered so serialisation is deterministic.
using Attributes = std::map<std::string, AttrValue>;

std::string attr_to_string(const AttrValue& value);

struct Node {
    std::string id;
    Attributes attrs;
};

struct Edge {
    std::size_t source;
    std::size_t target;
    double weight = 1.0;
};

/// Simple graph (no parallel edges, no self-loops) over string node ids.
/// Undirected edges are stored once with source < target.
class Graph {
public:
    explicit Graph(bool directed = true, bool weighted = false)
        : directed_(directed), weighted_(weighted)
    {
    }

    bool directed() const { return directed_; }
    bool weighted() const { return weighted_; }
    void set_weighted(bool weighted) { weighted_ = weighted; }

    /// Returns the node's index; an existing node keeps its attributes.
    std::size_t add_node(const std::string& id, Attributes attrs = {});
    std::optional<std::size_t> index_of(const std::string& id) const;
    bool has_node(const std::string& id) const { return index_.count(id) != 0; }

    /// False (and no change) for self-loops and already-present edges.
    bool add_edge(std::size_t source, std::size_t target, double weight = 1.0);
    /// Adds `by` to the edge weight, creating the edge with weight `by`.
    /// Self-loops are ignored.
    void increment_edge(std::size_t source, std::size_t target, double by = 1.0);
    bool has_edge(std::size_t source, std::size_t target) const;
    std::optional<std::size_t> edge_index(std::size_t source, std::size_t target) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Node& node(std::size_t i) const { return nodes_[i]; }
    Attributes& attrs(std::size_t i) { return nodes_[i].attrs; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Successors (directed) or neighbours (undirected), in insertion order.
    std::span<const std::size_t> out_neighbors(std::size_t i) const { return out_[i]; }
    /// Predecessors (directed) or neighbours (undirected).
    std::span<const std::size_t> in_neighbors(std::size_t i) const { return directed_ ? in_[i] : out_[i]; }

    std::size_t out_degree(std::size_t i) const { return out_[i].size(); }
    std::size_t in_degree(std::size_t i) const { return in_neighbors(i).size(); }

private:
    static std::uint64_t key(std::size_t a, std::size_t b)
    {
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
    }

    bool directed_;
    bool weighted_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::size_t> edge_lookup_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

/// Same ids, attributes, directedness and edge set (with weights);
/// weightedness only counts when there are edges. Node and edge order are
/// ignored.
bool same_graph(const Graph& a, const Graph& b);

} // namespace citenet
