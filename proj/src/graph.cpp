#include "citenet/graph.hpp"

#include <set>
#include <tuple>

#include <fmt/format.h>

namespace citenet {

std::string attr_to_string(const AttrValue& value)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return fmt::format("{}", v);
            }
        },
        value);
}

std::size_t Graph::add_node(const std::string& id, Attributes attrs)
{
    if (auto it = index_.find(id); it != index_.end()) {
        return it->second;
    }
    const std::size_t i = nodes_.size();
    nodes_.push_back(Node{id, std::move(attrs)});
    index_.emplace(id, i);
    out_.emplace_back();
    in_.emplace_back();
    return i;
}

std::optional<std::size_t> Graph::index_of(const std::string& id) const
{
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<std::size_t> Graph::edge_index(std::size_t source, std::size_t target) const
{
    if (!directed_ && source > target) {
        std::swap(source, target);
    }
    auto it = edge_lookup_.find(key(source, target));
    if (it == edge_lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool Graph::has_edge(std::size_t source, std::size_t target) const
{
    return edge_index(source, target).has_value();
}

bool Graph::add_edge(std::size_t source, std::size_t target, double weight)
{
    if (source == target) {
        return false;
    }
    if (!directed_ && source > target) {
        std::swap(source, target);
    }
    if (!edge_lookup_.emplace(key(source, target), edges_.size()).second) {
        return false;
    }
    edges_.push_back(Edge{source, target, weight});
    out_[source].push_back(target);
    if (directed_) {
        in_[target].push_back(source);
    } else {
        out_[target].push_back(source);
    }
    return true;
}

void Graph::increment_edge(std::size_t source, std::size_t target, double by)
{
    if (auto e = edge_index(source, target)) {
        edges_[*e].weight += by;
        return;
    }
    add_edge(source, target, by);
}

bool same_graph(const Graph& a, const Graph& b)
{
    if (a.directed() != b.directed() || a.node_count() != b.node_count() || a.edge_count() != b.edge_count() ||
        (a.edge_count() > 0 && a.weighted() != b.weighted())) {
        return false;
    }
    for (const auto& n : a.nodes()) {
        auto j = b.index_of(n.id);
        if (!j || b.node(*j).attrs != n.attrs) {
            return false;
        }
    }
    using EdgeKey = std::tuple<std::string, std::string, double>;
    auto edge_set = [](const Graph& g) {
        std::set<EdgeKey> s;
        for (const auto& e : g.edges()) {
            std::string u = g.node(e.source).id;
            std::string v = g.node(e.target).id;
            if (!g.directed() && v < u) {
                std::swap(u, v);
            }
            s.emplace(u, v, g.weighted() ? e.weight : 1.0);
        }
        return s;
    };
    return edge_set(a) == edge_set(b);
}

} // namespace citenet
