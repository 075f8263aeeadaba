#include "citenet/graph_builder.hpp"

#include <unordered_set>

#include <spdlog/spdlog.h>

#include "citenet/csv.hpp"
#include "citenet/gml.hpp"

namespace citenet {

Attributes citation_node_attrs(const Work& work)
{
    Attributes a;
    a["title"] = work.title;
    a["publication_date"] = work.publication_date;
    a["is_root"] = std::int64_t{work.is_root ? 1 : 0};
    a["citation_count"] = work.citation_count;
    a["type"] = work.type;
    a["language"] = work.language.value_or("");
    a["venue"] = work.venue ? work.venue->display_name : std::string{};
    std::vector<std::string> topics;
    for (const auto& t : work.topics) {
        topics.push_back(t.topic);
    }
    a["topics"] = join_list(topics);
    const TopicAssignment* primary = work.primary_topic();
    for (auto level : {TopicLevel::topic, TopicLevel::subfield, TopicLevel::field, TopicLevel::domain}) {
        a[std::string(to_string(level))] = primary ? topic_at(*primary, level) : std::string{};
    }
    return a;
}

Graph create_citation_graph(const Corpus& corpus, bool baseset, const std::optional<std::filesystem::path>& out_path)
{
    Graph graph(true, false);
    std::vector<const Work*> roots;
    for (const auto& [id, w] : corpus.works) {
        if (w.is_root) {
            roots.push_back(&w);
            graph.add_node(id, citation_node_attrs(w));
        }
    }

    auto neighbour = [&](const std::string& id) -> std::optional<std::size_t> {
        if (auto idx = graph.index_of(id)) {
            return idx;
        }
        if (!baseset) {
            return std::nullopt;
        }
        if (const Work* w = corpus.find(id)) {
            return graph.add_node(id, citation_node_attrs(*w));
        }
        spdlog::info("citation graph: no record for {}; adding a sparse node", id);
        return graph.add_node(id, Attributes{{"is_root", std::int64_t{0}}});
    };

    for (const Work* w : roots) {
        const std::size_t self = *graph.index_of(w->id);
        for (const auto& citing : w->cited_by) {
            if (auto src = neighbour(citing)) {
                graph.add_edge(*src, self);
            }
        }
        for (const auto& cited : w->cite) {
            if (auto dst = neighbour(cited)) {
                graph.add_edge(self, *dst);
            }
        }
    }

    if (out_path) {
        write_gml(graph, *out_path);
    }
    return graph;
}

namespace {

void add_coauthors(Graph& graph, const Work& work)
{
    std::vector<std::size_t> authors;
    std::unordered_set<std::string> seen;
    for (const auto& a : work.authorships) {
        if (!seen.insert(a.author_id).second) {
            continue;
        }
        Attributes attrs{{"display_name", a.display_name}, {"country", a.country.value_or("")}};
        authors.push_back(graph.add_node(a.author_id, std::move(attrs)));
    }
    for (std::size_t i = 0; i < authors.size(); ++i) {
        for (std::size_t j = i + 1; j < authors.size(); ++j) {
            graph.increment_edge(authors[i], authors[j], 1.0);
        }
    }
}

} // namespace

Graph create_coauthorship_graph(const Corpus& corpus, bool baseset, const std::optional<std::filesystem::path>& out_path)
{
    Graph graph(false, true);
    std::unordered_set<std::string> done;
    for (const auto& [id, w] : corpus.works) {
        if (!w.is_root) {
            continue;
        }
        done.insert(id);
        add_coauthors(graph, w);
    }
    if (baseset) {
        for (const auto& [id, w] : corpus.works) {
            if (!w.is_root) {
                continue;
            }
            for (const auto* list : {&w.cited_by, &w.cite}) {
                for (const auto& other : *list) {
                    if (!done.insert(other).second) {
                        continue;
                    }
                    if (const Work* ow = corpus.find(other)) {
                        add_coauthors(graph, *ow);
                    }
                }
            }
        }
    }
    if (out_path) {
        write_gml(graph, *out_path);
    }
    return graph;
}

} // namespace citenet
