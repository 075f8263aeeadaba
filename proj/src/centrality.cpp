#include "citenet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "citenet/centrality_kernels.hpp"
#include "citenet/csv.hpp"
#include "citenet/error.hpp"

namespace citenet {

namespace {

const std::vector<std::string> kMetrics = {"degree",
                                           "in_degree",
                                           "out_degree",
                                           "betweenness_centrality",
                                           "closeness_centrality",
                                           "eigenvector_centrality",
                                           "page_rank",
                                           "weighted_degree"};

const std::vector<std::string> kDirectedDefaults = {"degree",
                                                    "in_degree",
                                                    "out_degree",
                                                    "betweenness_centrality",
                                                    "closeness_centrality",
                                                    "eigenvector_centrality",
                                                    "page_rank"};

const std::vector<std::string> kUndirectedDefaults = {"degree", "betweenness_centrality", "closeness_centrality",
                                                      "eigenvector_centrality", "page_rank"};

const std::vector<std::string> kWorkFields = {"id",    "title",    "publication_date", "is_root", "citation_count",
                                              "type",  "language", "venue",            "topics",  "topic",
                                              "subfield", "field", "domain"};

const std::vector<std::string> kAuthorFields = {"id", "display_name", "country"};

void validate_metrics(const Graph& graph, std::span<const std::string> metrics)
{
    for (const auto& m : metrics) {
        if (std::find(kMetrics.begin(), kMetrics.end(), m) == kMetrics.end()) {
            throw ParameterError(fmt::format("unknown metric '{}'; valid metrics: {}", m, join_list(kMetrics, ", ")));
        }
        if (!graph.directed() && (m == "in_degree" || m == "out_degree")) {
            throw ParameterError(fmt::format("metric '{}' is not applicable to an undirected graph", m));
        }
    }
}

std::vector<double> eigenvector_centrality(const Graph& graph, const Csr& in, const CentralityParams& params)
{
    const std::size_t n = graph.node_count();
    std::vector<double> x(n, 0.0);
    if (n == 0 || graph.edge_count() == 0) {
        return x;
    }
    const double nd = static_cast<double>(n);
    std::fill(x.begin(), x.end(), 1.0 / nd);
    std::vector<double> next(n);
    for (int it = 0; it < params.max_iterations; ++it) {
        for (std::size_t v = 0; v < n; ++v) {
            double acc = x[v];
            for (std::size_t u : in.row(v)) {
                acc += x[u];
            }
            next[v] = acc;
        }
        double norm = 0.0;
        for (double v : next) {
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            norm = 1.0;
        }
        double err = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= norm;
            err += std::abs(next[v] - x[v]);
        }
        x.swap(next);
        if (err < nd * params.tolerance) {
            return x;
        }
    }
    throw ConvergenceError(fmt::format("eigenvector centrality did not converge within {} iterations",
                                       params.max_iterations));
}

} // namespace

double CentralityReport::at(const std::string& node_id, const std::string& metric) const
{
    auto it = values.find(metric);
    if (it == values.end()) {
        throw ParameterError(fmt::format("metric '{}' not in report", metric));
    }
    auto pos = std::find(node_ids.begin(), node_ids.end(), node_id);
    if (pos == node_ids.end()) {
        throw ParameterError(fmt::format("node '{}' not in report", node_id));
    }
    return it->second[static_cast<std::size_t>(pos - node_ids.begin())];
}

std::span<const std::string> metric_names()
{
    return kMetrics;
}

std::span<const std::string> default_metrics(bool directed)
{
    return directed ? std::span<const std::string>(kDirectedDefaults) : std::span<const std::string>(kUndirectedDefaults);
}

std::span<const std::string> node_field_names(bool directed)
{
    return directed ? std::span<const std::string>(kWorkFields) : std::span<const std::string>(kAuthorFields);
}

CentralityReport compute_centralities(const Graph& graph, std::span<const std::string> metrics,
                                      const CentralityParams& params, Execution execution)
{
    validate_metrics(graph, metrics);
    if (!(params.damping > 0.0 && params.damping < 1.0) || !(params.tolerance > 0.0) || params.max_iterations <= 0) {
        throw ParameterError("centrality parameters: damping must be in (0,1), tolerance and max_iterations positive");
    }

    CentralityReport report;
    const std::size_t n = graph.node_count();
    for (const auto& node : graph.nodes()) {
        report.node_ids.push_back(node.id);
    }
    if (n == 0) {
        for (const auto& m : metrics) {
            report.values[m];
        }
        return report;
    }

    const bool parallel = execution == Execution::parallel;
    const Csr out = out_csr(graph);
    const Csr in = in_csr(graph);

    for (const auto& m : metrics) {
        if (report.values.count(m)) {
            continue;
        }
        std::vector<double> v(n, 0.0);
        if (m == "degree") {
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = static_cast<double>(graph.directed() ? out.degree(i) + in.degree(i) : out.degree(i));
            }
        } else if (m == "in_degree") {
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = static_cast<double>(in.degree(i));
            }
        } else if (m == "out_degree") {
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = static_cast<double>(out.degree(i));
            }
        } else if (m == "weighted_degree") {
            for (const auto& e : graph.edges()) {
                const double w = graph.weighted() ? e.weight : 1.0;
                v[e.source] += w;
                v[e.target] += w;
            }
        } else if (m == "betweenness_centrality") {
            v = parallel ? kernels::betweenness_parallel(out) : kernels::betweenness_serial(out);
            const double scale = n > 2 ? 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2)) : 0.0;
            for (double& x : v) {
                x *= scale;
            }
        } else if (m == "closeness_centrality") {
            v = parallel ? kernels::closeness_parallel(in) : kernels::closeness_serial(in);
        } else if (m == "eigenvector_centrality") {
            v = eigenvector_centrality(graph, in, params);
        } else if (m == "page_rank") {
            std::vector<std::size_t> outdeg(n);
            for (std::size_t i = 0; i < n; ++i) {
                outdeg[i] = out.degree(i);
            }
            auto pr = parallel
                          ? kernels::pagerank_parallel(in, outdeg, params.damping, params.tolerance, params.max_iterations)
                          : kernels::pagerank_serial(in, outdeg, params.damping, params.tolerance, params.max_iterations);
            if (!pr.converged) {
                throw ConvergenceError(fmt::format("PageRank did not converge within {} iterations",
                                                   params.max_iterations));
            }
            v = std::move(pr.rank);
        }
        report.values.emplace(m, std::move(v));
    }
    return report;
}

namespace {

std::string format_metric(double v)
{
    return fmt::format("{}", v);
}

} // namespace

std::size_t extract_metrics_to_csv(const Graph& graph, std::span<const std::string> metrics,
                                   std::span<const std::string> fields, const std::filesystem::path& out_path,
                                   const CentralityParams& params)
{
    const auto valid = node_field_names(graph.directed());
    for (const auto& f : fields) {
        if (std::find(valid.begin(), valid.end(), f) == valid.end()) {
            throw FieldError(fmt::format("unknown {} field '{}'; valid fields: {}",
                                         graph.directed() ? "work" : "author", f, join_list(valid, ", ")));
        }
    }
    const CentralityReport report = compute_centralities(graph, metrics, params);

    std::vector<std::string> header(fields.begin(), fields.end());
    header.insert(header.end(), metrics.begin(), metrics.end());
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
        for (const auto& m : metrics) {
            cells.push_back(format_metric(report.values.at(m)[i]));
        }
        csv.row(cells);
    }
    csv.save(out_path);
    return graph.node_count();
}

double pearson(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = std::min(a.size(), b.size());
    if (n < 2) {
        return 0.0;
    }
    CompensatedSum sa, sb;
    for (std::size_t i = 0; i < n; ++i) {
        sa.add(a[i]);
        sb.add(b[i]);
    }
    const double ma = sa.value() / static_cast<double>(n);
    const double mb = sb.value() / static_cast<double>(n);
    CompensatedSum cov, va, vb;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        cov.add(da * db);
        va.add(da * da);
        vb.add(db * db);
    }
    if (va.value() <= 0.0 || vb.value() <= 0.0) {
        return 0.0;
    }
    return std::clamp(cov.value() / std::sqrt(va.value() * vb.value()), -1.0, 1.0);
}

namespace {

MetricSummary summarize(std::vector<double> v)
{
    MetricSummary s;
    if (v.empty()) {
        return s;
    }
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    CompensatedSum sum;
    for (double x : v) {
        sum.add(x);
    }
    s.mean = sum.value() / static_cast<double>(v.size());
    const std::size_t mid = v.size() / 2;
    s.median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    CompensatedSum sq;
    for (double x : v) {
        sq.add((x - s.mean) * (x - s.mean));
    }
    s.stddev = std::sqrt(sq.value() / static_cast<double>(v.size()));
    return s;
}

} // namespace

GraphStatistics graph_statistics(const Graph& graph, const CentralityReport& report)
{
    GraphStatistics st;
    st.nodes = graph.node_count();
    st.edges = graph.edge_count();
    st.directed = graph.directed();
    if (st.nodes < 2) {
        st.density = 0.0;
        st.density_defined = false;
    } else {
        const double n = static_cast<double>(st.nodes);
        const double m = static_cast<double>(st.edges);
        st.density = graph.directed() ? m / (n * (n - 1)) : 2.0 * m / (n * (n - 1));
    }
    for (const auto& [name, values] : report.values) {
        st.metrics.push_back(name);
    }
    // Canonical metric order.
    std::stable_sort(st.metrics.begin(), st.metrics.end(), [](const std::string& a, const std::string& b) {
        auto ia = std::find(kMetrics.begin(), kMetrics.end(), a);
        auto ib = std::find(kMetrics.begin(), kMetrics.end(), b);
        return ia < ib;
    });
    const std::size_t k = st.metrics.size();
    st.correlation.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        const auto& vi = report.values.at(st.metrics[i]);
        st.summaries.push_back(summarize(vi));
        st.correlation[i][i] = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double r = pearson(vi, report.values.at(st.metrics[j]));
            st.correlation[i][j] = r;
            st.correlation[j][i] = r;
        }
    }
    st.report = report;
    return st;
}

GraphStatistics graph_statistics(const Graph& graph, std::span<const std::string> metrics,
                                 const CentralityParams& params)
{
    return graph_statistics(graph, compute_centralities(graph, metrics, params));
}

} // namespace citenet
