#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "citenet/analytics.hpp"
#include "citenet/centrality.hpp"
#include "citenet/community.hpp"
#include "citenet/graph.hpp"

namespace citenet {

/// The ten-colour categorical ramp used by default everywhere.
const std::vector<std::string>& tab10();

struct ChartStyle {
    std::vector<std::string> palette = tab10();
    int width = 800;
    int height = 600;
    int num_ticks = 10;
    double title_font_size = 16.0;
    double axis_font_size = 11.0;
    double legend_font_size = 11.0;
    double node_font_size = 12.0;
    double min_node_radius = 18.0;
    double max_node_radius = 60.0;
    /// Pie ring thickness as a fraction of the node radius.
    double ring_thickness = 0.2;
    double min_edge_width = 1.0;
    double max_edge_width = 10.0;
    std::string edge_color = "#9e9e9e";
    std::uint64_t layout_seed = 42;
    int layout_iterations = 300;
    int histogram_bins = 10;

    /// Throws ParameterError on an empty palette, non-positive sizes or
    /// inverted radius bounds.
    void validate() const;
};

/// Entity drawn in the cluster pies: a topic level for citation graphs or the
/// author country for co-authorship graphs.
struct PieEntity {
    bool countries = false;
    TopicLevel level = TopicLevel::field;

    std::string attribute() const;
};

// Every renderer writes its SVG to out_path and returns the same bytes.
// Empty inputs produce a placeholder reading "no data".

std::string render_article_trends(const TimeSeries& series, const ChartStyle& style,
                                  const std::filesystem::path& out_path);
std::string render_topic_trends(const TimeSeries& series, const ChartStyle& style,
                                const std::filesystem::path& out_path);
std::string render_top_authors(const std::vector<AuthorRank>& ranking, const ChartStyle& style,
                               const std::filesystem::path& out_path);
std::string render_keyword_bars(const std::vector<KeywordScore>& scores, const ChartStyle& style,
                                const std::filesystem::path& out_path);
std::string render_keyword_trends(const TimeSeries& series, const ChartStyle& style,
                                  const std::filesystem::path& out_path);

/// Writes histogram_<metric>.svg per metric, correlation_heatmap.svg and
/// graph_summary.svg into out_dir. Returns the paths written.
std::vector<std::filesystem::path> render_graph_statistics(const GraphStatistics& stats, const ChartStyle& style,
                                                           const std::filesystem::path& out_dir);

std::string render_clustered_graph(const Graph& graph, const Clustering& clustering, std::size_t n_clusters,
                                   std::size_t m_entries, const PieEntity& entity, const ChartStyle& style,
                                   const std::filesystem::path& out_path);

std::string render_cluster_sizes(const Clustering& clustering, const ChartStyle& style, std::size_t n_clusters,
                                 const std::filesystem::path& out_path);

/// Equal-width bins over [min, max]; a constant metric gets one bin.
std::vector<std::size_t> histogram_counts(const std::vector<double>& values, int bins);

} // namespace citenet
