#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "citenet/graph.hpp"

namespace citenet {

struct CentralityParams {
    double damping = 0.85;
    double tolerance = 1e-9;
    int max_iterations = 1000;
};

enum class Execution { serial, parallel };

/// Metric values aligned with the graph's node order.
struct CentralityReport {
    std::vector<std::string> node_ids;
    std::map<std::string, std::vector<double>> values;

    double at(const std::string& node_id, const std::string& metric) const;
    bool has(const std::string& metric) const { return values.count(metric) != 0; }
};

/// degree, in_degree, out_degree, betweenness_centrality,
/// closeness_centrality, eigenvector_centrality, page_rank, weighted_degree.
std::span<const std::string> metric_names();

/// The seven metrics reported by default (all but weighted_degree).
std::span<const std::string> default_metrics(bool directed);

/// Degrees are raw counts (degree = in + out on directed graphs).
/// Betweenness counts shortest paths over ordered pairs divided by
/// (n-1)(n-2), which equals the unordered normalisation on undirected graphs.
/// Closeness uses distances towards the node with the reachable-set
/// correction. Eigenvector centrality power-iterates (I + A^T) and is zero on
/// edgeless graphs. PageRank spreads dangling mass uniformly. Edge weights
/// only enter weighted_degree.
///
/// Throws ParameterError for unknown metrics or in/out degree on an
/// undirected graph, ConvergenceError when eigenvector or PageRank iteration
/// exceeds max_iterations.
CentralityReport compute_centralities(const Graph& graph, std::span<const std::string> metrics,
                                      const CentralityParams& params = {},
                                      Execution execution = Execution::parallel);

/// Exportable node fields: "id" plus the attributes the graph builders attach
/// (work attributes on directed graphs, author attributes on undirected ones).
std::span<const std::string> node_field_names(bool directed);

/// One row per node, columns = fields ++ metrics. Returns the row count.
std::size_t extract_metrics_to_csv(const Graph& graph, std::span<const std::string> metrics,
                                   std::span<const std::string> fields, const std::filesystem::path& out_path,
                                   const CentralityParams& params = {});

struct MetricSummary {
    double min = 0, max = 0, mean = 0, median = 0, stddev = 0;
};

struct GraphStatistics {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    bool directed = true;
    double density = 0.0;
    /// False when n < 2; density is then reported as 0.
    bool density_defined = true;
    std::vector<std::string> metrics;
    std::vector<MetricSummary> summaries;
    /// Pearson correlations, metrics x metrics. The diagonal is 1; pairs
    /// involving a constant metric are 0.
    std::vector<std::vector<double>> correlation;
    /// Node-aligned metric values the summaries came from.
    CentralityReport report;
};

GraphStatistics graph_statistics(const Graph& graph, std::span<const std::string> metrics,
                                 const CentralityParams& params = {});
GraphStatistics graph_statistics(const Graph& graph, const CentralityReport& report);

double pearson(std::span<const double> a, std::span<const double> b);

} // namespace citenet
