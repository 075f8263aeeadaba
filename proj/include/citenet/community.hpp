#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citenet/graph.hpp"

namespace citenet {

enum class Algorithm { louvain, girvan_newman, infomap, spectral, sbm };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view text);

struct Clustering {
    std::vector<std::string> node_ids;
    /// Cluster per node, aligned with node_ids. Ids are contiguous from 0 and
    /// ordered by descending cluster size (ties: earliest member first).
    std::vector<std::size_t> assignment;
    Algorithm algorithm = Algorithm::louvain;
    std::uint64_t seed = 0;
    /// Modularity (louvain, girvan_newman), codelength in bits (infomap),
    /// log-likelihood (sbm); unset for spectral.
    std::optional<double> quality;

    std::size_t cluster_count() const;
    /// Sizes indexed by cluster id (hence non-increasing).
    std::vector<std::size_t> sizes() const;
};

/// Undirected weighted adjacency every algorithm runs on. Directed graphs are
/// symmetrised to the unweighted union of both directions; undirected graphs
/// keep their edge weights.
struct UndirectedNetwork {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;
    std::vector<double> strength;
    /// Sum of edge weights (each undirected edge once).
    double total_weight = 0.0;

    std::size_t edge_count() const;
};

UndirectedNetwork symmetrize(const Graph& graph);
UndirectedNetwork network_from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

/// Newman-Girvan modularity at resolution 1.
double modularity(const UndirectedNetwork& net, std::span<const std::size_t> partition);

/// Two-level map equation in bits, with node visit rates from a random walk
/// teleporting with probability `teleport` and exit flows counting link flow
/// only.
double map_equation(const UndirectedNetwork& net, std::span<const std::size_t> partition, double teleport = 0.15);

/// Non-degree-corrected SBM description length (nats) and its
/// log-likelihood part.
struct SbmScore {
    double description_length = 0.0;
    double log_likelihood = 0.0;
};
SbmScore sbm_description_length(const UndirectedNetwork& net, std::span<const std::size_t> partition);

/// Relabels clusters to 0..k-1 by descending size, ties by earliest member.
std::vector<std::size_t> canonical_labels(std::span<const std::size_t> partition);

/// Every partition visited by Girvan-Newman edge removal, starting with the
/// connected components of the input, one entry per increase in the
/// component count.
std::vector<std::vector<std::size_t>> girvan_newman_dendrogram(const UndirectedNetwork& net);

/// Called after each accepted Louvain move with the partition's modularity.
using LouvainObserver = std::function<void(double modularity)>;

std::vector<std::size_t> louvain_partition(const UndirectedNetwork& net, std::uint64_t seed,
                                           const LouvainObserver& observer = {});
std::vector<std::size_t> infomap_partition(const UndirectedNetwork& net, std::uint64_t seed, double teleport = 0.15);
/// Throws ParameterError when k is 0 or exceeds n, NumericError when the
/// eigen-solver fails.
std::vector<std::size_t> spectral_partition(const UndirectedNetwork& net, std::size_t k, std::uint64_t seed);
std::vector<std::size_t> sbm_partition(const UndirectedNetwork& net, std::uint64_t seed, int restarts = 10);

/// `k` is required for (and only accepted by) spectral clustering. Throws
/// ParameterError on a missing/extra k, k > n, or an empty graph.
Clustering cluster_graph(const Graph& graph, Algorithm algorithm, std::uint64_t seed,
                         std::optional<std::size_t> k = std::nullopt);

/// Columns = fields ++ ["cluster"], one row per node. Fields are validated
/// as for extract_metrics_to_csv.
std::size_t extract_clusters_to_csv(const Clustering& clustering, const Graph& graph,
                                    std::span<const std::string> fields, const std::filesystem::path& out_path);

/// Reads the id and cluster columns of a cluster CSV back into a Clustering
/// aligned with `graph` (algorithm and seed are not recorded in the file).
Clustering read_clusters_csv(const std::filesystem::path& path, const Graph& graph);

/// Deterministic pseudo-random stream shared by the seeded algorithms.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace citenet
