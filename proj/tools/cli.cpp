#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "citenet/analytics.hpp"
#include "citenet/centrality.hpp"
#include "citenet/charts.hpp"
#include "citenet/community.hpp"
#include "citenet/corpus.hpp"
#include "citenet/error.hpp"
#include "citenet/gml.hpp"
#include "citenet/graph_builder.hpp"
#include "citenet/io.hpp"
#include "citenet/lite_regex.hpp"
#include "citenet/openalex_client.hpp"
#include "json.hpp"

namespace citenet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Thrown for bad flag values discovered after parsing.
struct UsageError : Error {
    using Error::Error;
};

struct Inputs {
    // shared
    std::string config_path;
    std::string out;
    // fetch
    std::vector<std::string> queries;
    std::string mail;
    std::string from, to;
    bool no_cache = false;
    std::string fixture_dir;
    std::string cache_dir;
    std::size_t budget = 0;
    // graph
    std::string corpus;
    std::string kind = "citation";
    bool baseset = false;
    // metrics / cluster
    std::string graph;
    std::vector<std::string> metrics;
    std::vector<std::string> fields;
    std::string algorithm = "louvain";
    std::uint64_t seed = 42;
    std::size_t k = 0;
    // report
    std::string clusters;
    std::string interval = "quarter";
    std::size_t top_n = 10;
    std::size_t num_authors = 10;
    int ngram_lo = 1;
    int ngram_hi = 2;
    std::size_t n_clusters = 5;
    std::size_t m_entries = 5;
    std::string topics_level = "field";
    bool by_citations = true;
    int width = 800;
    int height = 600;
};

/// Resolves one setting: explicit flag, then the environment, then the config
/// file, then the built-in default.
class Settings {
public:
    explicit Settings(json config) : config_(std::move(config)) {}

    template <typename T>
    T get(const CLI::Option* flag, const T& flag_value, const char* env_name, const std::string& key,
          const T& fallback) const
    {
        if (flag && flag->count() > 0) {
            return flag_value;
        }
        if (env_name) {
            if (const char* v = std::getenv(env_name); v && *v) {
                return from_text<T>(v, env_name);
            }
        }
        if (config_.contains(key)) {
            try {
                return config_.at(key).get<T>();
            } catch (const json::exception&) {
                throw UsageError(fmt::format("config key '{}' has the wrong type", key));
            }
        }
        return fallback;
    }

private:
    template <typename T>
    static T from_text(const std::string& text, const char* name)
    {
        if constexpr (std::is_same_v<T, std::string>) {
            return text;
        } else {
            try {
                return static_cast<T>(std::stoull(text));
            } catch (const std::exception&) {
                throw UsageError(fmt::format("{} must be a non-negative integer, got '{}'", name, text));
            }
        }
    }

    json config_;
};

json load_config(const std::string& path)
{
    if (path.empty()) {
        return json::object();
    }
    try {
        json j = json::parse(read_file(path));
        if (!j.is_object()) {
            throw UsageError(fmt::format("config file {} must hold a JSON object", path));
        }
        return j;
    } catch (const json::parse_error& e) {
        throw UsageError(fmt::format("config file {}: {}", path, e.what()));
    }
}

std::vector<std::string> split_list(const std::vector<std::string>& items)
{
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const auto comma = item.find(',', start);
            std::string part = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!part.empty()) {
                out.push_back(part);
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    return out;
}

int cmd_fetch(const Inputs& in, const Settings& s, const CLI::App& app, std::ostream& out)
{
    std::vector<std::string> patterns = in.queries;
    if (patterns.empty()) {
        patterns = s.get<std::vector<std::string>>(nullptr, {}, nullptr, "query", {});
    }
    if (patterns.empty()) {
        throw UsageError("fetch needs at least one --query");
    }
    HarvestRequest req;
    for (const auto& p : patterns) {
        for (auto& q : expand_lite_regex(p)) {
            if (std::find(req.queries.begin(), req.queries.end(), q) == req.queries.end()) {
                req.queries.push_back(std::move(q));
            }
        }
    }
    req.mail = s.get<std::string>(app.get_option("--mail"), in.mail, nullptr, "mail", "");
    if (!is_valid_mail(req.mail)) {
        throw UsageError(fmt::format("--mail '{}' is not a valid address", req.mail));
    }
    if (auto from = s.get<std::string>(app.get_option("--from"), in.from, nullptr, "from", ""); !from.empty()) {
        req.from_date = from;
    }
    if (auto to = s.get<std::string>(app.get_option("--to"), in.to, nullptr, "to", ""); !to.empty()) {
        req.to_date = to;
    }
    req.cache = !in.no_cache && s.get<bool>(nullptr, true, nullptr, "cache", true);
    req.output_dir = s.get<std::string>(app.get_option("--out"), in.out, nullptr, "out", ".");

    ClientOptions opts;
    opts.cache_dir = s.get<std::string>(app.get_option("--cache-dir"), in.cache_dir, "CITENET_CACHE_DIR", "cache_dir",
                                        opts.cache_dir.string());
    opts.daily_budget =
        s.get<std::size_t>(app.get_option("--budget"), in.budget, "CITENET_BUDGET", "budget", opts.daily_budget);
    if (auto fixtures =
            s.get<std::string>(app.get_option("--fixture-dir"), in.fixture_dir, "CITENET_FIXTURES", "fixture_dir", "");
        !fixtures.empty()) {
        opts.fixture_dir = fixtures;
    }

    OpenAlexClient client(opts);
    const fs::path path = retrieve_articles(client, req);
    const Corpus corpus = load_corpus(path);
    out << "corpus: " << path.string() << "\n";
    out << "root works: " << corpus.root_count() << "\n";
    out << "base works: " << corpus.base_count() << "\n";
    out << "upstream requests: " << client.upstream_requests() << "\n";
    return 0;
}

int cmd_graph(const Inputs& in, const Settings& s, const CLI::App& app, std::ostream& out)
{
    if (in.kind != "citation" && in.kind != "coauthorship") {
        throw UsageError(fmt::format("--kind must be citation or coauthorship, not '{}'", in.kind));
    }
    const Corpus corpus = load_corpus(in.corpus);
    const std::string path =
        s.get<std::string>(app.get_option("--out"), in.out, nullptr, "graph_out", in.kind + "_graph.gml");
    const Graph g = in.kind == "citation" ? create_citation_graph(corpus, in.baseset, fs::path(path))
                                          : create_coauthorship_graph(corpus, in.baseset, fs::path(path));
    out << "graph: " << path << "\n";
    out << "nodes: " << g.node_count() << "\n";
    out << "edges: " << g.edge_count() << "\n";
    return 0;
}

std::vector<std::string> metric_list(const Inputs& in, const Graph& g)
{
    auto metrics = split_list(in.metrics);
    if (metrics.empty()) {
        if (g.directed()) {
            metrics = {"betweenness_centrality", "closeness_centrality", "page_rank", "in_degree", "out_degree"};
        } else {
            metrics = {"betweenness_centrality", "closeness_centrality", "page_rank", "degree"};
        }
    }
    return metrics;
}

std::vector<std::string> field_list(const Inputs& in, const Graph& g)
{
    auto fields = split_list(in.fields);
    if (fields.empty()) {
        fields = {"id", g.directed() ? "title" : "display_name"};
    }
    return fields;
}

int cmd_metrics(const Inputs& in, const CLI::App& app, std::ostream& out)
{
    const Graph g = read_gml(in.graph);
    const auto metrics = metric_list(in, g);
    const auto fields = field_list(in, g);
    const std::string path = app.get_option("--out")->count() ? in.out : "metrics.csv";
    const auto rows = extract_metrics_to_csv(g, metrics, fields, path);
    out << "metrics: " << path << "\n";
    out << "rows: " << rows << "\n";
    return 0;
}

int cmd_cluster(const Inputs& in, const Settings& s, const CLI::App& app, std::ostream& out)
{
    const Graph g = read_gml(in.graph);
    const Algorithm algorithm =
        algorithm_from_string(s.get<std::string>(app.get_option("--algorithm"), in.algorithm, nullptr, "algorithm",
                                                 "louvain"));
    const auto seed = s.get<std::uint64_t>(app.get_option("--seed"), in.seed, nullptr, "seed", 42);
    std::optional<std::size_t> k;
    if (app.get_option("--k")->count()) {
        k = in.k;
    }
    const Clustering c = cluster_graph(g, algorithm, seed, k);
    const auto fields = field_list(in, g);
    const std::string path = app.get_option("--out")->count() ? in.out : "clusters.csv";
    extract_clusters_to_csv(c, g, fields, path);
    const UndirectedNetwork net = symmetrize(g);
    out << "clusters: " << path << "\n";
    out << "algorithm: " << to_string(algorithm) << "\n";
    out << "cluster count: " << c.cluster_count() << "\n";
    out << fmt::format("modularity: {:.4f}\n", modularity(net, c.assignment));
    if (c.quality && algorithm == Algorithm::infomap) {
        out << fmt::format("codelength: {:.4f}\n", *c.quality);
    } else if (c.quality && algorithm == Algorithm::sbm) {
        out << fmt::format("log-likelihood: {:.4f}\n", *c.quality);
    }
    return 0;
}

int cmd_report(const Inputs& in, const Settings& s, const CLI::App& app, std::ostream& out)
{
    const Corpus corpus = load_corpus(in.corpus);
    const fs::path dir = s.get<std::string>(app.get_option("--out"), in.out, nullptr, "report_out", "report");
    fs::create_directories(dir);
    ChartStyle style;
    style.width = s.get<int>(app.get_option("--width"), in.width, nullptr, "width", 800);
    style.height = s.get<int>(app.get_option("--height"), in.height, nullptr, "height", 600);
    style.layout_seed = s.get<std::uint64_t>(app.get_option("--seed"), in.seed, nullptr, "seed", 42);
    style.validate();

    const Interval interval = interval_from_string(in.interval);
    const TopicLevel level = topic_level_from_string(in.topics_level);
    const Filters filters;
    const std::pair<int, int> ngrams{in.ngram_lo, in.ngram_hi};
    std::vector<fs::path> written;
    auto emit = [&](const fs::path& p) { written.push_back(p); };

    render_article_trends(aggregate_article_counts(corpus, interval), style, dir / "article_trends.svg");
    emit(dir / "article_trends.svg");
    render_topic_trends(aggregate_topic_counts(corpus, level, interval, filters, in.top_n), style,
                        dir / "topic_trends.svg");
    emit(dir / "topic_trends.svg");
    render_top_authors(rank_top_authors(corpus, in.by_citations, in.num_authors, filters, level), style,
                       dir / "top_authors.svg");
    emit(dir / "top_authors.svg");
    render_keyword_bars(extract_keywords(corpus, filters, in.top_n, ngrams), style, dir / "top_keywords.svg");
    emit(dir / "top_keywords.svg");
    render_keyword_trends(keyword_trend_series(corpus, filters, in.top_n, ngrams, interval), style,
                          dir / "keyword_trends.svg");
    emit(dir / "keyword_trends.svg");

    if (!in.graph.empty()) {
        const Graph g = read_gml(in.graph);
        std::vector<std::string> metrics;
        for (const auto& m : metric_list(in, g)) {
            try {
                compute_centralities(g, std::vector<std::string>{m});
                metrics.push_back(m);
            } catch (const ConvergenceError& e) {
                spdlog::warn("skipping {} in the report: {}", m, e.what());
            }
        }
        for (const auto& p : render_graph_statistics(graph_statistics(g, metrics), style, dir)) {
            emit(p);
        }
        Clustering c;
        if (!in.clusters.empty()) {
            c = read_clusters_csv(in.clusters, g);
        }
        PieEntity entity;
        entity.countries = !g.directed();
        entity.level = level;
        render_clustered_graph(g, c, in.n_clusters, in.m_entries, entity, style, dir / "clustered_graph.svg");
        emit(dir / "clustered_graph.svg");
        render_cluster_sizes(c, style, in.n_clusters, dir / "cluster_sizes.svg");
        emit(dir / "cluster_sizes.svg");
    }
    std::sort(written.begin(), written.end());
    for (const auto& p : written) {
        out << "wrote " << p.string() << "\n";
    }
    return 0;
}

void ensure_logger()
{
    if (!spdlog::get("citenet")) {
        auto logger = spdlog::stderr_color_mt("citenet");
        logger->set_pattern("%l: %v");
        spdlog::set_default_logger(logger);
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    ensure_logger();
    CLI::App app{"citenet: harvest scholarly metadata and analyse citation and co-authorship networks"};
    app.require_subcommand(1);
    Inputs in;

    auto* fetch = app.add_subcommand("fetch", "Harvest root and base set works into a corpus file");
    fetch->add_option("--query", in.queries, "Query pattern; (a|b) groups expand to variants");
    fetch->add_option("--mail", in.mail, "Contact address sent with every request");
    fetch->add_option("--from", in.from, "Earliest publication date (YYYY[-MM[-DD]])");
    fetch->add_option("--to", in.to, "Latest publication date (YYYY[-MM[-DD]])");
    fetch->add_flag("--no-cache", in.no_cache, "Bypass the response cache");
    fetch->add_option("--out", in.out, "Output directory (the corpus lands in query_results/)");
    fetch->add_option("--fixture-dir", in.fixture_dir, "Replay recorded responses from this directory");
    fetch->add_option("--cache-dir", in.cache_dir, "Response cache directory");
    fetch->add_option("--budget", in.budget, "Upstream requests allowed per day");
    fetch->add_option("--config", in.config_path, "JSON file with default settings");

    auto* graph = app.add_subcommand("graph", "Build a citation or co-authorship graph as GML");
    graph->add_option("--corpus", in.corpus, "Corpus JSON file")->required();
    graph->add_option("--kind", in.kind, "citation or coauthorship");
    graph->add_flag("--baseset", in.baseset, "Include base set works");
    graph->add_option("--out", in.out, "GML output path");
    graph->add_option("--config", in.config_path, "JSON file with default settings");

    auto* metrics = app.add_subcommand("metrics", "Export centrality metrics to CSV");
    metrics->add_option("--graph", in.graph, "GML file")->required();
    metrics->add_option("--metrics", in.metrics, "Comma-separated metric names")->delimiter(',');
    metrics->add_option("--fields", in.fields, "Comma-separated node fields")->delimiter(',');
    metrics->add_option("--out", in.out, "CSV output path");

    auto* cluster = app.add_subcommand("cluster", "Detect communities and export them to CSV");
    cluster->add_option("--graph", in.graph, "GML file")->required();
    cluster->add_option("--algorithm", in.algorithm, "louvain, girvan_newman, infomap, spectral or sbm");
    cluster->add_option("--seed", in.seed, "Random seed");
    cluster->add_option("--k", in.k, "Number of clusters (spectral only)");
    cluster->add_option("--fields", in.fields, "Comma-separated node fields")->delimiter(',');
    cluster->add_option("--out", in.out, "CSV output path");
    cluster->add_option("--config", in.config_path, "JSON file with default settings");

    auto* report = app.add_subcommand("report", "Render the SVG chart set");
    report->add_option("--corpus", in.corpus, "Corpus JSON file")->required();
    report->add_option("--graph", in.graph, "GML file for the network charts");
    report->add_option("--clusters", in.clusters, "Cluster CSV from the cluster command");
    report->add_option("--out", in.out, "Output directory");
    report->add_option("--interval", in.interval, "month, quarter or year");
    report->add_option("--top-n", in.top_n, "Topics and keywords to show");
    report->add_option("--num-authors", in.num_authors, "Authors to rank");
    report->add_option("--ngram-min", in.ngram_lo, "Shortest keyword n-gram");
    report->add_option("--ngram-max", in.ngram_hi, "Longest keyword n-gram");
    report->add_option("--n-clusters", in.n_clusters, "Clusters to draw");
    report->add_option("--m-entries", in.m_entries, "Pie segments per cluster");
    report->add_option("--topics-level", in.topics_level, "field or domain");
    report->add_option("--metrics", in.metrics, "Comma-separated metric names")->delimiter(',');
    report->add_option("--seed", in.seed, "Layout seed for the clustered graph");
    report->add_option("--width", in.width, "Chart width in px");
    report->add_option("--height", in.height, "Chart height in px");
    report->add_option("--config", in.config_path, "JSON file with default settings");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        const Settings settings(load_config(in.config_path));
        if (fetch->parsed()) {
            return cmd_fetch(in, settings, *fetch, out);
        }
        if (graph->parsed()) {
            return cmd_graph(in, settings, *graph, out);
        }
        if (metrics->parsed()) {
            return cmd_metrics(in, *metrics, out);
        }
        if (cluster->parsed()) {
            return cmd_cluster(in, settings, *cluster, out);
        }
        return cmd_report(in, settings, *report, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParameterError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const FieldError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidQueryError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedPatternError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace citenet::cli
