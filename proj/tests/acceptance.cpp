#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "citenet/analytics.hpp"
#include "citenet/centrality.hpp"
#include "citenet/community.hpp"
#include "citenet/corpus.hpp"
#include "citenet/csv.hpp"
#include "citenet/error.hpp"
#include "citenet/gml.hpp"
#include "citenet/graph_builder.hpp"
#include "citenet/io.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace citenet;
using Strings = std::vector<std::string>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) return INFINITY;
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double total(const std::vector<double>& v)
{
    double s = 0;
    for (double x : v) s += x;
    return s;
}

Outcome centrality_oracles()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(7);
    double worst = 0;
    int eigen_checked = 0, eigen_mismatch = 0;
    const Strings metrics = {"degree", "in_degree", "out_degree", "betweenness_centrality", "closeness_centrality",
                             "page_rank"};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        const double p = 0.15 + 0.6 * std::uniform_real_distribution<double>(0, 1)(rng);
        const Graph g = testsupport::random_graph(rng, n, p, true);
        const auto a = oracle::adjacency(g);
        const auto r = compute_centralities(g, metrics);
        std::vector<double> in(n, 0), out(n, 0), deg(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                out[i] += a[i][j];
                in[j] += a[i][j];
            }
        for (std::size_t i = 0; i < n; ++i) deg[i] = in[i] + out[i];
        worst = std::max({worst, max_abs_diff(r.values.at("degree"), deg), max_abs_diff(r.values.at("in_degree"), in),
                          max_abs_diff(r.values.at("out_degree"), out),
                          max_abs_diff(r.values.at("betweenness_centrality"), oracle::betweenness(a, true)),
                          max_abs_diff(r.values.at("closeness_centrality"),
                                       oracle::closeness(oracle::floyd_warshall(a))),
                          max_abs_diff(r.values.at("page_rank"), oracle::pagerank(a, 0.85))});
        const auto ev = oracle::eigenvector(a, 1e-9, 1000);
        try {
            const auto er = compute_centralities(g, Strings{"eigenvector_centrality"});
            if (ev.converged) {
                ++eigen_checked;
                worst = std::max(worst, max_abs_diff(er.values.at("eigenvector_centrality"), ev.x));
            } else {
                ++eigen_mismatch;
            }
        } catch (const ConvergenceError&) {
            eigen_mismatch += ev.converged ? 1 : 0;
        }
    }
    const double secs = seconds_since(start);
    return {worst <= 1e-6 && eigen_mismatch == 0 && secs < 30.0,
            fmt::format("max |diff| {:.2e}, eigenvector compared on {} graphs, {} convergence mismatches, {:.2f} s",
                        worst, eigen_checked, eigen_mismatch, secs)};
}

Outcome pagerank_mass()
{
    std::mt19937_64 rng(7);
    double worst = 0;
    std::size_t graphs = 0;
    auto check = [&](const Graph& g) {
        if (g.node_count() == 0) return;
        worst = std::max(worst, std::abs(total(compute_centralities(g, Strings{"page_rank"}).values.at("page_rank")) - 1.0));
        ++graphs;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        check(testsupport::random_graph(rng, n, 0.15 + 0.6 * std::uniform_real_distribution<double>(0, 1)(rng), true));
    }
    for (int trial = 0; trial < 100; ++trial) check(testsupport::random_graph(rng, 1 + rng() % 40, 0.1, trial % 2));
    for (bool baseset : {false, true}) {
        check(create_citation_graph(testsupport::fixture_corpus(), baseset));
        check(create_coauthorship_graph(testsupport::fixture_corpus(), baseset));
    }
    const double damping = CentralityParams{}.damping;
    return {worst <= 1e-9 && damping == 0.85,
            fmt::format("{} graphs, max |sum - 1| {:.2e}, default damping {}", graphs, worst, damping)};
}

std::map<std::pair<std::string, std::string>, int> shared_works(const Corpus& c, bool baseset)
{
    std::set<std::string> scope;
    for (const auto& [id, w] : c.works) {
        if (!w.is_root) continue;
        scope.insert(id);
        if (!baseset) continue;
        for (const auto& n : w.cite)
            if (c.find(n)) scope.insert(n);
        for (const auto& n : w.cited_by)
            if (c.find(n)) scope.insert(n);
    }
    std::map<std::pair<std::string, std::string>, int> counts;
    for (const auto& id : scope) {
        std::set<std::string> authors;
        for (const auto& a : c.find(id)->authorships) authors.insert(a.author_id);
        for (auto a = authors.begin(); a != authors.end(); ++a)
            for (auto b = std::next(a); b != authors.end(); ++b) ++counts[{*a, *b}];
    }
    return counts;
}

Outcome graph_construction()
{
    const Corpus& c = testsupport::fixture_corpus();
    const Graph full = create_citation_graph(c, true);
    const Graph roots = create_citation_graph(c, false);
    bool weights_ok = true;
    std::size_t pairs = 0;
    for (bool baseset : {false, true}) {
        const Graph g = create_coauthorship_graph(c, baseset);
        const auto expected = shared_works(c, baseset);
        weights_ok = weights_ok && g.edge_count() == expected.size();
        for (const auto& e : g.edges()) {
            auto u = g.node(e.source).id, v = g.node(e.target).id;
            if (v < u) std::swap(u, v);
            const auto it = expected.find({u, v});
            weights_ok = weights_ok && it != expected.end() && e.weight == static_cast<double>(it->second);
            ++pairs;
        }
    }
    const bool counts_ok = full.node_count() == 15 && full.edge_count() == 15 && roots.node_count() == 5 &&
                           roots.edge_count() == 3;
    return {counts_ok && weights_ok,
            fmt::format("baseset {}/{}, root only {}/{}, {} co-authorship weights {}", full.node_count(),
                        full.edge_count(), roots.node_count(), roots.edge_count(), pairs,
                        weights_ok ? "match" : "differ")};
}

Outcome communities()
{
    using testsupport::same_grouping;
    const auto start = Clock::now();
    const Graph cliques = testsupport::graph_from(10, testsupport::two_cliques_edges());
    const testsupport::Partition truth = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    bool recovered = true;
    for (Algorithm a : {Algorithm::louvain, Algorithm::girvan_newman, Algorithm::infomap})
        recovered = recovered && same_grouping(cluster_graph(cliques, a, 42).assignment, truth);

    const auto karate_edges = testsupport::karate_edges();
    const Graph karate = testsupport::graph_from(34, karate_edges);
    const Clustering kc = cluster_graph(karate, Algorithm::louvain, 42);
    const double q = kc.quality.value_or(-1.0);
    const double q_oracle = testsupport::oracle_modularity(34, karate_edges, kc.assignment);

    bool deterministic = true;
    for (const Graph* g : {&cliques, &karate})
        for (Algorithm a : {Algorithm::louvain, Algorithm::girvan_newman, Algorithm::infomap, Algorithm::spectral,
                            Algorithm::sbm}) {
            const std::optional<std::size_t> k = a == Algorithm::spectral ? std::optional<std::size_t>(2) : std::nullopt;
            deterministic = deterministic && cluster_graph(*g, a, 7, k).assignment == cluster_graph(*g, a, 7, k).assignment;
        }
    const double secs = seconds_since(start);
    return {recovered && q >= 0.40 && std::abs(q - q_oracle) < 1e-9 && deterministic && secs < 60.0,
            fmt::format("cliques {}, karate Q {:.4f} (oracle {:.4f}, {} clusters), deterministic {}, {:.2f} s",
                        recovered ? "recovered" : "missed", q, q_oracle, kc.cluster_count(), deterministic, secs)};
}

Graph random_attributed_graph(std::mt19937_64& rng)
{
    static const Strings keys = {"title", "citation_count", "page_rank", "topics", "country"};
    static const Strings words = {"city", "São Paulo", "say \"hi\"", "a; b", "", "x & y", "[b]"};
    const bool weighted = rng() % 2;
    Graph g(rng() % 2, weighted);
    const std::size_t n = rng() % 15;
    for (std::size_t i = 0; i < n; ++i) {
        Attributes attrs;
        for (std::size_t j = rng() % 4; j > 0; --j) {
            const auto& key = keys[rng() % keys.size()];
            switch (rng() % 3) {
            case 0: attrs[key] = static_cast<std::int64_t>(rng() % 100000) - 50000; break;
            case 1: attrs[key] = std::uniform_real_distribution<double>(-1e3, 1e3)(rng); break;
            default: attrs[key] = words[rng() % words.size()];
            }
        }
        g.add_node("W" + std::to_string(i), attrs);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rng() % 5 == 0) g.add_edge(i, j, weighted ? 0.5 * static_cast<double>(1 + rng() % 8) : 1.0);
    return g;
}

Outcome gml_round_trip()
{
    testsupport::TempDir dir("acceptance_gml");
    std::mt19937_64 rng(2024);
    int ok = 0;
    for (int i = 0; i < 50; ++i) {
        const Graph g = random_attributed_graph(rng);
        const auto path = dir / fmt::format("g{}.gml", i);
        write_gml(g, path);
        ok += same_graph(read_gml(path), g) ? 1 : 0;
    }
    bool golden = false;
    std::string note;
    try {
        const Graph g = read_gml(testsupport::data_dir() / "golden.gml");
        golden = g.node_count() == 4 && g.edge_count() == 5 && same_graph(parse_gml(to_gml(g)), g);
        note = fmt::format("golden {} nodes / {} edges", g.node_count(), g.edge_count());
    } catch (const std::exception& e) {
        note = fmt::format("golden failed: {}", e.what());
    }
    return {ok == 50 && golden, fmt::format("{}/50 random graphs isomorphic after write/read, {}", ok, note)};
}

Outcome export_contracts()
{
    testsupport::TempDir dir("acceptance_export");
    const Corpus& c = testsupport::fixture_corpus();
    const Strings header = {"venue", "type", "id", "doi", "title", "publication_date", "authorships_display_name",
                            "language"};
    const auto all = export_articles_csv(c, header, true, dir / "articles.csv");
    const auto roots = export_articles_csv(c, header, false, dir / "roots.csv");
    const bool header_ok =
        read_file(dir / "articles.csv")
            .starts_with("venue,type,id,doi,title,publication_date,authorships_display_name,language\n");
    bool rows_ok = all == c.root_count() + c.base_count() && roots == c.root_count() &&
                         read_csv(dir / "articles.csv").size() == all + 1;

    const auto scopus_rows = export_articles_to_scopus(c, true, dir / "scopus.csv");
    const CsvTable scopus = read_csv(dir / "scopus.csv");
    const Strings minimum = {"Authors",         "Author(s) ID",    "Title", "Year",          "Source title",
                             "Volume",          "Issue",           "Cited by", "DOI",         "Link",
                             "Abstract",        "Author Keywords", "Document Type", "Language of Original Document",
                             "EID"};
    bool columns_ok = !scopus.empty();
    for (const auto& col : minimum)
        columns_ok = columns_ok && std::find(scopus[0].begin(), scopus[0].end(), col) != scopus[0].end();
    const auto scopus_roots = export_articles_to_scopus(c, false, dir / "scopus_roots.csv");
    rows_ok = rows_ok && scopus_rows == all && scopus_roots == roots;
    return {header_ok && rows_ok && columns_ok,
            fmt::format("header {}, rows {} = {} root + {} base, Scopus columns {}", header_ok ? "verbatim" : "differs",
                        all, roots, all - roots, columns_ok ? "present" : "missing")};
}

Outcome analytics_conservation()
{
    const Corpus& c = testsupport::fixture_corpus();
    bool trends_ok = true;
    for (Interval iv : {Interval::month, Interval::quarter, Interval::year}) {
        const TimeSeries ts = aggregate_article_counts(c, iv);
        trends_ok = trends_ok && ts.total("root") == static_cast<std::int64_t>(c.root_count()) &&
                    ts.total("base") == static_cast<std::int64_t>(c.base_count());
        for (TopicLevel level : {TopicLevel::field, TopicLevel::domain}) {
            const TimeSeries topics = aggregate_topic_counts(c, level, iv, {}, 3);
            std::int64_t sum = 0;
            for (const auto& s : topics.series) sum += topics.total(s);
            trends_ok = trends_ok && sum == static_cast<std::int64_t>(c.works.size());
        }
    }

    Corpus three;
    const std::vector<std::pair<std::string, std::string>> abstracts = {
        {"2020-01-15", "The smart city uses smart sensors."},
        {"2020-05-02", "Smart cities and the smart city of tomorrow."},
        {"2021-03-03", "Sensors in the 15 minute city."}};
    for (std::size_t i = 0; i < abstracts.size(); ++i) {
        Work w;
        w.id = "K" + std::to_string(i + 1);
        w.publication_date = abstracts[i].first;
        w.abstract = abstracts[i].second;
        w.is_root = i < 2;
        three.works.emplace(w.id, w);
    }
    const std::map<std::string, std::int64_t> hand = {{"smart", 4},  {"city", 3},   {"sensors", 2}, {"uses", 1},
                                                      {"cities", 1}, {"tomorrow", 1}, {"15", 1},      {"minute", 1},
                                                      {"smart city", 2}};
    std::map<std::string, std::int64_t> got;
    for (const auto& k : extract_keywords(three, {}, 100, {1, 2})) got[k.ngram] = k.count;
    bool keywords_ok = got.size() == 8 + 10;
    for (const auto& [ngram, count] : hand) keywords_ok = keywords_ok && got.count(ngram) && got.at(ngram) == count;
    const TimeSeries kt = keyword_trend_series(three, {}, 2, {1, 1}, Interval::quarter);
    keywords_ok = keywords_ok && kt.total("smart") == 4 && kt.total("city") == 3;
    return {trends_ok && keywords_ok, fmt::format("trend totals {}, keyword counts {}", trends_ok ? "conserved" : "drift",
                                                  keywords_ok ? "match hand counts" : "differ")};
}

/// fetch -> graph -> metrics -> cluster -> report inside `dir`.
int pipeline(const fs::path& dir, std::string& log)
{
    std::ostringstream out, err;
    auto step = [&](Strings args) {
        const int code = cli::run(args, out, err);
        if (code != 0) log = err.str();
        return code;
    };
    const fs::path corpus = dir / "query_results";
    if (step({"fetch", "--query", "15 (minute|min) city", "--mail", "tester@example.org", "--from", "2019-01-01",
              "--out", dir.string(), "--fixture-dir", testsupport::fixture_dir().string(), "--cache-dir",
              (dir / "cache").string()}))
        return 1;
    fs::path corpus_file;
    for (const auto& e : fs::directory_iterator(corpus)) corpus_file = e.path();
    const std::string gml = (dir / "citation.gml").string();
    if (step({"graph", "--corpus", corpus_file.string(), "--kind", "citation", "--baseset", "--out", gml})) return 1;
    if (step({"graph", "--corpus", corpus_file.string(), "--kind", "coauthorship", "--baseset", "--out",
              (dir / "coauthorship.gml").string()}))
        return 1;
    if (step({"metrics", "--graph", gml, "--out", (dir / "metrics.csv").string()})) return 1;
    if (step({"cluster", "--graph", gml, "--seed", "42", "--out", (dir / "clusters.csv").string()})) return 1;
    return step({"report", "--corpus", corpus_file.string(), "--graph", gml, "--clusters",
                 (dir / "clusters.csv").string(), "--out", (dir / "report").string()});
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        const auto rel = fs::relative(e.path(), dir);
        if (e.is_regular_file() && *rel.begin() != "cache") files[rel.generic_string()] = read_file(e.path());
    }
    return files;
}

Outcome end_to_end()
{
    const auto start = Clock::now();
    testsupport::TempDir a("acceptance_run_a"), b("acceptance_run_b");
    std::string log;
    if (pipeline(a.path(), log) != 0 || pipeline(b.path(), log) != 0) return {false, "pipeline failed: " + log};
    const auto sa = snapshot(a.path()), sb = snapshot(b.path());
    std::size_t differing = 0;
    for (const auto& [name, bytes] : sa) {
        const auto it = sb.find(name);
        differing += it == sb.end() || it->second != bytes ? 1 : 0;
    }
    const double secs = seconds_since(start);
    const bool svgs = sa.count("report/clustered_graph.svg") && sa.count("report/article_trends.svg");
    return {sa.size() == sb.size() && differing == 0 && svgs && secs < 120.0,
            fmt::format("{} files per run, {} differ, {:.2f} s for both runs", sa.size(), differing, secs)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"centrality oracle suite", centrality_oracles},
        {"PageRank mass", pagerank_mass},
        {"graph construction on the fixture", graph_construction},
        {"community detection", communities},
        {"GML round-trip and golden sample", gml_round_trip},
        {"export contracts", export_contracts},
        {"analytics conservation", analytics_conservation},
        {"end-to-end fixture pipeline", end_to_end},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
