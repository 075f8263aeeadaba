#include "citenet/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "citenet/centrality.hpp"
#include "citenet/csv.hpp"
#include "citenet/error.hpp"

namespace citenet {

std::string_view to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::louvain: return "louvain";
    case Algorithm::girvan_newman: return "girvan_newman";
    case Algorithm::infomap: return "infomap";
    case Algorithm::spectral: return "spectral";
    case Algorithm::sbm: return "sbm";
    }
    return "louvain";
}

Algorithm algorithm_from_string(std::string_view text)
{
    for (auto a : {Algorithm::louvain, Algorithm::girvan_newman, Algorithm::infomap, Algorithm::spectral, Algorithm::sbm}) {
        if (text == to_string(a)) {
            return a;
        }
    }
    throw ParameterError(fmt::format(
        "unknown clustering algorithm '{}' (expected louvain, girvan_newman, infomap, spectral, sbm)", text));
}

std::uint64_t SeededRng::next()
{
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::size_t Clustering::cluster_count() const
{
    if (assignment.empty()) {
        return 0;
    }
    return *std::max_element(assignment.begin(), assignment.end()) + 1;
}

std::vector<std::size_t> Clustering::sizes() const
{
    std::vector<std::size_t> s(cluster_count(), 0);
    for (auto c : assignment) {
        ++s[c];
    }
    return s;
}

std::size_t UndirectedNetwork::edge_count() const
{
    std::size_t twice = 0;
    for (const auto& row : adj) {
        twice += row.size();
    }
    return twice / 2;
}

namespace {

void finalize(UndirectedNetwork& net)
{
    net.strength.assign(net.n, 0.0);
    net.total_weight = 0.0;
    for (std::size_t u = 0; u < net.n; ++u) {
        std::sort(net.adj[u].begin(), net.adj[u].end());
        for (const auto& [v, w] : net.adj[u]) {
            net.strength[u] += w;
            if (u < v) {
                net.total_weight += w;
            }
        }
    }
}

} // namespace

UndirectedNetwork symmetrize(const Graph& graph)
{
    UndirectedNetwork net;
    net.n = graph.node_count();
    net.adj.assign(net.n, {});
    std::map<std::pair<std::size_t, std::size_t>, double> weights;
    for (const auto& e : graph.edges()) {
        auto key = std::minmax(e.source, e.target);
        const double w = (!graph.directed() && graph.weighted()) ? e.weight : 1.0;
        auto [it, inserted] = weights.emplace(key, w);
        if (!inserted && !graph.directed()) {
            it->second += w;
        }
    }
    for (const auto& [key, w] : weights) {
        net.adj[key.first].emplace_back(key.second, w);
        net.adj[key.second].emplace_back(key.first, w);
    }
    finalize(net);
    return net;
}

UndirectedNetwork network_from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges)
{
    Graph g(false, false);
    for (std::size_t i = 0; i < n; ++i) {
        g.add_node(std::to_string(i));
    }
    for (const auto& [u, v] : edges) {
        g.add_edge(u, v);
    }
    return symmetrize(g);
}

double modularity(const UndirectedNetwork& net, std::span<const std::size_t> partition)
{
    const double m = net.total_weight;
    if (m <= 0.0) {
        return 0.0;
    }
    std::unordered_map<std::size_t, double> internal, degree;
    for (std::size_t u = 0; u < net.n; ++u) {
        degree[partition[u]] += net.strength[u];
        for (const auto& [v, w] : net.adj[u]) {
            if (u < v && partition[u] == partition[v]) {
                internal[partition[u]] += w;
            }
        }
    }
    std::vector<std::size_t> labels;
    for (const auto& [c, _] : degree) {
        labels.push_back(c);
    }
    std::sort(labels.begin(), labels.end());
    double q = 0.0;
    for (auto c : labels) {
        const double d = degree[c] / (2.0 * m);
        q += internal[c] / m - d * d;
    }
    return q;
}

std::vector<std::size_t> canonical_labels(std::span<const std::size_t> partition)
{
    std::unordered_map<std::size_t, std::size_t> size, first;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        ++size[partition[i]];
        first.emplace(partition[i], i);
    }
    std::vector<std::size_t> labels;
    for (const auto& [c, _] : size) {
        labels.push_back(c);
    }
    std::sort(labels.begin(), labels.end(), [&](std::size_t a, std::size_t b) {
        if (size[a] != size[b]) {
            return size[a] > size[b];
        }
        return first[a] < first[b];
    });
    std::unordered_map<std::size_t, std::size_t> rename;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        rename[labels[i]] = i;
    }
    std::vector<std::size_t> out(partition.size());
    for (std::size_t i = 0; i < partition.size(); ++i) {
        out[i] = rename[partition[i]];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

struct LevelGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;
    /// Weight of ordered pairs inside the node (twice its internal weight).
    std::vector<double> self;
    std::vector<double> k;
};

LevelGraph level_from_network(const UndirectedNetwork& net)
{
    LevelGraph g;
    g.n = net.n;
    g.adj = net.adj;
    g.self.assign(net.n, 0.0);
    g.k = net.strength;
    return g;
}

/// One round of local moves. Returns true if any node moved.
bool louvain_local_moves(const LevelGraph& g, std::vector<std::size_t>& comm, SeededRng& rng, double two_m,
                         const LouvainObserver& observer)
{
    const std::size_t n = g.n;
    std::vector<double> tot(n), in(n);
    for (std::size_t i = 0; i < n; ++i) {
        comm[i] = i;
        tot[i] = g.k[i];
        in[i] = g.self[i];
    }
    auto quality = [&] {
        double q = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (tot[c] > 0.0 || in[c] > 0.0) {
                q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
            }
        }
        return q;
    };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    const double eps = 1e-12 * std::max(1.0, two_m);
    std::vector<double> link(n, 0.0);
    std::vector<std::size_t> touched;
    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t i : order) {
            touched.clear();
            for (const auto& [j, w] : g.adj[i]) {
                const std::size_t c = comm[j];
                if (link[c] == 0.0) {
                    touched.push_back(c);
                }
                link[c] += w;
            }
            const std::size_t old = comm[i];
            tot[old] -= g.k[i];
            in[old] -= 2.0 * link[old] + g.self[i];

            auto gain = [&](std::size_t c) { return link[c] - tot[c] * g.k[i] / two_m; };
            const double stay = gain(old);
            std::sort(touched.begin(), touched.end());
            std::size_t best = old;
            double best_gain = stay;
            for (std::size_t c : touched) {
                if (c == old) {
                    continue;
                }
                const double gc = gain(c);
                if (gc > stay + eps && (best == old || gc > best_gain)) {
                    best = c;
                    best_gain = gc;
                }
            }

            tot[best] += g.k[i];
            in[best] += 2.0 * link[best] + g.self[i];
            comm[i] = best;
            for (std::size_t c : touched) {
                link[c] = 0.0;
            }
            if (best != old) {
                moved = true;
                any_move = true;
                if (observer) {
                    observer(quality());
                }
            }
        }
    }
    return any_move;
}

LevelGraph aggregate(const LevelGraph& g, std::vector<std::size_t>& comm)
{
    std::vector<std::size_t> rename(g.n, SIZE_MAX);
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (rename[comm[i]] == SIZE_MAX) {
            rename[comm[i]] = count++;
        }
    }
    for (auto& c : comm) {
        c = rename[c];
    }
    LevelGraph agg;
    agg.n = count;
    agg.adj.assign(count, {});
    agg.self.assign(count, 0.0);
    agg.k.assign(count, 0.0);
    std::vector<std::map<std::size_t, double>> rows(count);
    for (std::size_t i = 0; i < g.n; ++i) {
        const std::size_t ci = comm[i];
        agg.self[ci] += g.self[i];
        agg.k[ci] += g.k[i];
        for (const auto& [j, w] : g.adj[i]) {
            const std::size_t cj = comm[j];
            if (ci == cj) {
                agg.self[ci] += w;
            } else {
                rows[ci][cj] += w;
            }
        }
    }
    for (std::size_t c = 0; c < count; ++c) {
        agg.adj[c].assign(rows[c].begin(), rows[c].end());
    }
    return agg;
}

} // namespace

std::vector<std::size_t> louvain_partition(const UndirectedNetwork& net, std::uint64_t seed,
                                           const LouvainObserver& observer)
{
    std::vector<std::size_t> membership(net.n);
    std::iota(membership.begin(), membership.end(), std::size_t{0});
    const double two_m = 2.0 * net.total_weight;
    if (net.n == 0 || two_m <= 0.0) {
        return membership;
    }
    SeededRng rng(seed);
    LevelGraph level = level_from_network(net);
    std::vector<std::size_t> comm(level.n);
    while (true) {
        comm.assign(level.n, 0);
        const bool moved = louvain_local_moves(level, comm, rng, two_m, observer);
        if (!moved) {
            break;
        }
        LevelGraph next = aggregate(level, comm);
        for (auto& m : membership) {
            m = comm[m];
        }
        if (next.n == level.n) {
            break;
        }
        level = std::move(next);
    }
    return membership;
}

// ---------------------------------------------------------------------------
// Girvan-Newman

namespace {

struct GnEdge {
    std::size_t u, v;
};

std::vector<std::size_t> component_labels(std::size_t n, const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj,
                                          const std::vector<char>& active, std::size_t& count)
{
    std::vector<std::size_t> label(n, SIZE_MAX);
    std::vector<std::size_t> stack;
    count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != SIZE_MAX) {
            continue;
        }
        label[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& [v, e] : adj[u]) {
                if (active[e] && label[v] == SIZE_MAX) {
                    label[v] = count;
                    stack.push_back(v);
                }
            }
        }
        ++count;
    }
    return label;
}

std::vector<double> edge_betweenness(std::size_t n, const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj,
                                     const std::vector<char>& active, std::size_t edge_total)
{
    std::vector<double> eb(edge_total, 0.0);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::size_t> dist(n), order;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const std::size_t u = order[head];
            for (const auto& [v, e] : adj[u]) {
                if (!active[e]) {
                    continue;
                }
                if (dist[v] == SIZE_MAX) {
                    dist[v] = dist[u] + 1;
                    order.push_back(v);
                }
                if (dist[v] == dist[u] + 1) {
                    sigma[v] += sigma[u];
                }
            }
        }
        for (std::size_t k = order.size(); k-- > 0;) {
            const std::size_t u = order[k];
            for (const auto& [v, e] : adj[u]) {
                if (active[e] && dist[v] == dist[u] + 1) {
                    const double c = sigma[u] / sigma[v] * (1.0 + delta[v]);
                    eb[e] += c;
                    delta[u] += c;
                }
            }
        }
    }
    return eb;
}

} // namespace

std::vector<std::vector<std::size_t>> girvan_newman_dendrogram(const UndirectedNetwork& net)
{
    const std::size_t n = net.n;
    std::vector<GnEdge> edges;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& [v, w] : net.adj[u]) {
            if (u < v) {
                adj[u].emplace_back(v, edges.size());
                adj[v].emplace_back(u, edges.size());
                edges.push_back({u, v});
            }
        }
    }
    std::vector<char> active(edges.size(), 1);
    std::size_t components = 0;
    std::vector<std::vector<std::size_t>> levels;
    levels.push_back(component_labels(n, adj, active, components));

    std::size_t remaining = edges.size();
    while (remaining > 0) {
        const auto eb = edge_betweenness(n, adj, active, edges.size());
        std::size_t best = SIZE_MAX;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (!active[e]) {
                continue;
            }
            if (best == SIZE_MAX || eb[e] > eb[best] * (1.0 + 1e-9) + 1e-12) {
                best = e;
            }
        }
        active[best] = 0;
        --remaining;
        std::size_t now = 0;
        auto labels = component_labels(n, adj, active, now);
        if (now > components) {
            components = now;
            levels.push_back(std::move(labels));
        }
    }
    return levels;
}

// ---------------------------------------------------------------------------
// Driver

Clustering cluster_graph(const Graph& graph, Algorithm algorithm, std::uint64_t seed, std::optional<std::size_t> k)
{
    if (graph.node_count() == 0) {
        throw ParameterError("cannot cluster an empty graph");
    }
    if (algorithm == Algorithm::spectral && !k) {
        throw ParameterError("spectral clustering requires the number of clusters k");
    }
    if (algorithm != Algorithm::spectral && k) {
        throw ParameterError(fmt::format("k only applies to spectral clustering, not {}", to_string(algorithm)));
    }
    const UndirectedNetwork net = symmetrize(graph);

    Clustering result;
    result.algorithm = algorithm;
    result.seed = seed;
    for (const auto& node : graph.nodes()) {
        result.node_ids.push_back(node.id);
    }

    std::vector<std::size_t> partition;
    switch (algorithm) {
    case Algorithm::louvain:
        partition = louvain_partition(net, seed);
        result.quality = modularity(net, partition);
        break;
    case Algorithm::girvan_newman: {
        const auto levels = girvan_newman_dendrogram(net);
        double best_q = -2.0;
        for (const auto& level : levels) {
            const double q = modularity(net, level);
            if (q > best_q + 1e-12) {
                best_q = q;
                partition = level;
            }
        }
        result.quality = best_q;
        break;
    }
    case Algorithm::infomap:
        partition = infomap_partition(net, seed);
        result.quality = map_equation(net, partition);
        break;
    case Algorithm::spectral:
        partition = spectral_partition(net, *k, seed);
        break;
    case Algorithm::sbm:
        partition = sbm_partition(net, seed);
        result.quality = sbm_description_length(net, partition).log_likelihood;
        break;
    }
    result.assignment = canonical_labels(partition);
    return result;
}

std::size_t extract_clusters_to_csv(const Clustering& clustering, const Graph& graph,
                                    std::span<const std::string> fields, const std::filesystem::path& out_path)
{
    const auto valid = node_field_names(graph.directed());
    for (const auto& f : fields) {
        if (std::find(valid.begin(), valid.end(), f) == valid.end()) {
            throw FieldError(fmt::format("unknown {} field '{}'; valid fields: {}",
                                         graph.directed() ? "work" : "author", f, join_list(valid, ", ")));
        }
    }
    if (clustering.assignment.size() != graph.node_count()) {
        throw ParameterError("clustering does not cover the graph");
    }
    std::vector<std::string> header(fields.begin(), fields.end());
    header.emplace_back("cluster");
    CsvWriter csv;
    csv.row(header);
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto& node = graph.node(i);
        std::vector<std::string> cells;
        for (const auto& f : fields) {
            if (f == "id") {
                cells.push_back(node.id);
            } else if (auto it = node.attrs.find(f); it != node.attrs.end()) {
                cells.push_back(attr_to_string(it->second));
            } else {
                cells.emplace_back();
            }
        }
        cells.push_back(std::to_string(clustering.assignment[i]));
        csv.row(cells);
    }
    csv.save(out_path);
    return graph.node_count();
}

Clustering read_clusters_csv(const std::filesystem::path& path, const Graph& graph)
{
    const CsvTable table = read_csv(path);
    if (table.empty()) {
        throw DecodeError(fmt::format("{}: empty cluster file", path.string()));
    }
    const auto& header = table.front();
    auto col = [&](std::string_view name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DecodeError(fmt::format("{}: missing '{}' column", path.string(), name));
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t id_col = col("id");
    const std::size_t cluster_col = col("cluster");

    Clustering c;
    c.node_ids.resize(graph.node_count());
    c.assignment.assign(graph.node_count(), SIZE_MAX);
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        c.node_ids[i] = graph.node(i).id;
    }
    for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& row = table[r];
        if (row.size() <= std::max(id_col, cluster_col)) {
            throw DecodeError(fmt::format("{}: short row {}", path.string(), r + 1));
        }
        auto idx = graph.index_of(row[id_col]);
        if (!idx) {
            throw DecodeError(fmt::format("{}: node '{}' is not in the graph", path.string(), row[id_col]));
        }
        try {
            c.assignment[*idx] = std::stoul(row[cluster_col]);
        } catch (const std::exception&) {
            throw DecodeError(fmt::format("{}: bad cluster id '{}'", path.string(), row[cluster_col]));
        }
    }
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        if (c.assignment[i] == SIZE_MAX) {
            throw DecodeError(fmt::format("{}: node '{}' has no cluster", path.string(), c.node_ids[i]));
        }
    }
    c.assignment = canonical_labels(c.assignment);
    return c;
}

} // namespace citenet
