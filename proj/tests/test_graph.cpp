#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "citenet/error.hpp"
#include "citenet/gml.hpp"
#include "citenet/graph_builder.hpp"
#include "citenet/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace citenet;
using testsupport::fixture_corpus;
using testsupport::TempDir;
using EdgeSet = std::set<std::pair<std::string, std::string>>;

namespace {

// R1..R5 = W43010000{01..05}, B1..B10 = W29010000{01..10}.
std::string R(int i)
{
    return "W430100000" + std::to_string(i);
}

std::string B(int i)
{
    return i < 10 ? "W290100000" + std::to_string(i) : "W29010000" + std::to_string(i);
}

EdgeSet edge_ids(const Graph& g)
{
    EdgeSet out;
    for (const auto& e : g.edges()) {
        out.emplace(g.node(e.source).id, g.node(e.target).id);
    }
    return out;
}

Work authored(const std::string& id, std::vector<std::string> authors, bool root = true)
{
    Work w;
    w.id = id;
    w.title = id;
    w.publication_date = "2021-01-01";
    w.type = "article";
    w.is_root = root;
    for (const auto& a : authors) {
        w.authorships.push_back({a, "Name " + a, std::nullopt, {}});
    }
    return w;
}

Corpus corpus_of(std::vector<Work> works)
{
    Corpus c;
    for (auto& w : works) {
        c.works.emplace(w.id, std::move(w));
    }
    return c;
}

/// Shared-work counts computed directly from the works in scope.
std::map<std::pair<std::string, std::string>, int> shared_work_counts(const Corpus& c, bool baseset)
{
    std::set<std::string> scope;
    for (const auto& [id, w] : c.works) {
        if (!w.is_root) {
            continue;
        }
        scope.insert(id);
        if (baseset) {
            for (const auto& n : w.cite) {
                if (c.find(n)) scope.insert(n);
            }
            for (const auto& n : w.cited_by) {
                if (c.find(n)) scope.insert(n);
            }
        }
    }
    std::map<std::pair<std::string, std::string>, int> counts;
    for (const auto& id : scope) {
        std::set<std::string> authors;
        for (const auto& a : c.find(id)->authorships) {
            authors.insert(a.author_id);
        }
        for (auto a = authors.begin(); a != authors.end(); ++a) {
            for (auto b = std::next(a); b != authors.end(); ++b) {
                ++counts[{*a, *b}];
            }
        }
    }
    return counts;
}

AttrValue random_attr(std::mt19937_64& rng)
{
    static const std::vector<std::string> words = {"city", "15-minute", "São Paulo", "say \"hi\"", "a; b; c",
                                                   "",     "tab\there", "München",   "x & y",     "[bracket]"};
    switch (rng() % 3) {
    case 0:
        return static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    case 1:
        return std::uniform_real_distribution<double>(-1e6, 1e6)(rng) * std::pow(10.0, double(rng() % 13) - 6.0);
    default:
        return words[rng() % words.size()] + std::to_string(rng() % 7);
    }
}

Graph random_attributed_graph(std::mt19937_64& rng)
{
    const bool directed = rng() % 2;
    const bool weighted = rng() % 2;
    Graph g(directed, weighted);
    const std::size_t n = rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
        Attributes attrs;
        const std::size_t k = rng() % 5;
        static const std::vector<std::string> keys = {"title", "citation_count", "page_rank", "topics", "is_root",
                                                      "country", "x_1"};
        for (std::size_t j = 0; j < k; ++j) {
            attrs[keys[rng() % keys.size()]] = random_attr(rng);
        }
        g.add_node("W" + std::to_string(rng() % 100000) + "_" + std::to_string(i), attrs);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && rng() % 4 == 0) {
                const double w = weighted ? static_cast<double>(1 + rng() % 9) / (1 + rng() % 4) : 1.0;
                g.add_edge(i, j, w);
            }
        }
    }
    return g;
}

} // namespace

TEST_SUITE("graph")
{
    TEST_CASE("fixture citation graph with base set: 15 nodes, 15 edges")
    {
        const Graph g = create_citation_graph(fixture_corpus(), true);
        CHECK(g.directed());
        CHECK_FALSE(g.weighted());
        CHECK(g.node_count() == 15);
        CHECK(g.edge_count() == 15);
        const EdgeSet expected = {{R(1), B(1)}, {R(1), B(2)}, {R(1), R(2)},  {R(2), B(3)}, {R(2), B(4)},
                                  {R(3), B(5)}, {R(3), B(6)}, {R(3), R(4)},  {R(4), B(7)}, {R(4), B(8)},
                                  {R(5), B(9)}, {R(5), B(10)}, {R(5), R(1)}, {B(1), R(3)}, {B(6), R(1)}};
        CHECK(edge_ids(g) == expected);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(g.node(i).id.rfind("W43", 0) == 0);
        }
    }

    TEST_CASE("fixture citation graph without base set: 5 nodes, 3 edges")
    {
        const Graph g = create_citation_graph(fixture_corpus(), false);
        CHECK(g.node_count() == 5);
        CHECK(g.edge_count() == 3);
        CHECK(edge_ids(g) == EdgeSet{{R(1), R(2)}, {R(3), R(4)}, {R(5), R(1)}});
        for (const auto& n : g.nodes()) {
            CHECK(std::get<std::int64_t>(n.attrs.at("is_root")) == 1);
        }
    }

    TEST_CASE("root-only graph is a subgraph of the base-set graph")
    {
        const Graph small = create_citation_graph(fixture_corpus(), false);
        const Graph big = create_citation_graph(fixture_corpus(), true);
        for (const auto& n : small.nodes()) {
            CHECK(big.has_node(n.id));
        }
        const auto big_edges = edge_ids(big);
        for (const auto& e : edge_ids(small)) {
            CHECK(big_edges.count(e) == 1);
        }
    }

    TEST_CASE("citation node attributes")
    {
        const Graph g = create_citation_graph(fixture_corpus(), true);
        const auto& a = g.node(*g.index_of(R(1))).attrs;
        CHECK(std::get<std::string>(a.at("publication_date")) == "2021-01-08");
        CHECK(std::get<std::int64_t>(a.at("citation_count")) == 120);
        CHECK(std::get<std::string>(a.at("topics")) == "Sustainable Urban Planning; Urban Transport and Accessibility");
        CHECK(std::get<std::string>(a.at("field")) == "Social Sciences");
        const auto& b10 = g.node(*g.index_of(B(10))).attrs;
        CHECK(std::get<std::int64_t>(b10.at("is_root")) == 0);
    }

    TEST_CASE("two root works A cites B")
    {
        Work a = authored("A", {});
        Work b = authored("B", {});
        a.cite = {"B"};
        b.cited_by = {"A"};
        const Graph g = create_citation_graph(corpus_of({a, b}), false);
        CHECK(g.node_count() == 2);
        CHECK(g.edge_count() == 1);
        CHECK(edge_ids(g) == EdgeSet{{"A", "B"}});
    }

    TEST_CASE("dangling ids become sparse nodes with the base set")
    {
        Work a = authored("A", {});
        a.cite = {"GHOST"};
        const Graph g = create_citation_graph(corpus_of({a}), true);
        REQUIRE(g.has_node("GHOST"));
        CHECK(g.edge_count() == 1);
    }

    TEST_CASE("co-authorship weights equal shared-work counts on the fixture")
    {
        for (bool baseset : {false, true}) {
            CAPTURE(baseset);
            const Graph g = create_coauthorship_graph(fixture_corpus(), baseset);
            CHECK_FALSE(g.directed());
            CHECK(g.weighted());
            const auto expected = shared_work_counts(fixture_corpus(), baseset);
            CHECK(g.edge_count() == expected.size());
            for (const auto& e : g.edges()) {
                std::string u = g.node(e.source).id;
                std::string v = g.node(e.target).id;
                if (v < u) std::swap(u, v);
                REQUIRE(expected.count({u, v}) == 1);
                CHECK(e.weight == static_cast<double>(expected.at({u, v})));
                CHECK(e.weight >= 1.0);
                CHECK(e.source != e.target);
            }
        }
    }

    TEST_CASE("co-authorship hand counts on the fixture")
    {
        // A1 and A2 share R1 and R2. R1 is also a neighbour of R5 but counts once.
        const Graph g = create_coauthorship_graph(fixture_corpus(), true);
        CHECK(g.node_count() == 12);
        const auto a1 = *g.index_of("A1");
        const auto a2 = *g.index_of("A2");
        CHECK(g.edges()[*g.edge_index(a1, a2)].weight == 2.0);
        CHECK(g.has_edge(*g.index_of("A4"), *g.index_of("A6")));
        const Graph roots = create_coauthorship_graph(fixture_corpus(), false);
        CHECK(roots.node_count() == 6);
        CHECK_FALSE(roots.has_node("A7"));
        CHECK_FALSE(roots.has_edge(*roots.index_of("A4"), *roots.index_of("A6")));
        CHECK(std::get<std::string>(g.node(a1).attrs.at("country")) == "FR");
    }

    TEST_CASE("co-authorship trivial cases")
    {
        const Graph tri = create_coauthorship_graph(corpus_of({authored("W1", {"a", "b", "c"})}), false);
        CHECK(tri.node_count() == 3);
        CHECK(tri.edge_count() == 3);
        for (const auto& e : tri.edges()) {
            CHECK(e.weight == 1.0);
        }
        const Graph two = create_coauthorship_graph(corpus_of({authored("W1", {"a", "b"}), authored("W2", {"b", "a"})}),
                                                    false);
        REQUIRE(two.edge_count() == 1);
        CHECK(two.edges()[0].weight == 2.0);
        const Graph solo = create_coauthorship_graph(corpus_of({authored("W1", {"a"})}), false);
        CHECK(solo.node_count() == 1);
        CHECK(solo.edge_count() == 0);
        const Graph dup = create_coauthorship_graph(corpus_of({authored("W1", {"a", "b", "a"})}), false);
        REQUIRE(dup.edge_count() == 1);
        CHECK(dup.edges()[0].weight == 1.0);
        const Graph none = create_coauthorship_graph(corpus_of({authored("W1", {})}), false);
        CHECK(none.node_count() == 0);
    }

    TEST_CASE("graph rejects self-loops and parallel edges")
    {
        Graph g(true);
        const auto a = g.add_node("a");
        const auto b = g.add_node("b");
        CHECK_FALSE(g.add_edge(a, a));
        CHECK(g.add_edge(a, b));
        CHECK_FALSE(g.add_edge(a, b));
        CHECK(g.add_edge(b, a));
        Graph u(false);
        u.add_node("a");
        u.add_node("b");
        CHECK(u.add_edge(1, 0));
        CHECK_FALSE(u.add_edge(0, 1));
        CHECK(u.edge_count() == 1);
    }

    TEST_CASE("GML round-trip on 50 random attributed graphs")
    {
        std::mt19937_64 rng(20240502);
        for (int i = 0; i < 50; ++i) {
            CAPTURE(i);
            const Graph g = random_attributed_graph(rng);
            const Graph back = parse_gml(to_gml(g));
            CHECK(same_graph(g, back));
            CHECK(to_gml(back) == to_gml(g));
            CHECK(back.directed() == g.directed());
            for (std::size_t v = 0; v < g.node_count(); ++v) {
                const auto idx = back.index_of(g.node(v).id);
                REQUIRE(idx);
                CHECK(back.node(*idx).attrs == g.node(v).attrs);
            }
        }
    }

    TEST_CASE("same_graph notices differences")
    {
        Graph a(true);
        a.add_node("x", {{"k", std::int64_t{1}}});
        a.add_node("y");
        a.add_edge(0, 1);
        Graph b = a;
        CHECK(same_graph(a, b));
        b.attrs(0)["k"] = std::int64_t{2};
        CHECK_FALSE(same_graph(a, b));
        Graph c(true);
        c.add_node("x", {{"k", std::int64_t{1}}});
        c.add_node("y");
        c.add_edge(1, 0);
        CHECK_FALSE(same_graph(a, c));
    }

    TEST_CASE("GML empty graph and 3-node path")
    {
        const Graph empty(true);
        const std::string text = to_gml(empty);
        const Graph back = parse_gml(text);
        CHECK(back.node_count() == 0);
        CHECK(back.directed());

        Graph path(true);
        path.add_node("a");
        path.add_node("b");
        path.add_node("c");
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        TempDir dir("gml");
        write_gml(path, dir / "p.gml");
        CHECK(same_graph(read_gml(dir / "p.gml"), path));
    }

    TEST_CASE("topic-list attributes survive as flattened strings")
    {
        const Graph g = create_citation_graph(fixture_corpus(), true);
        const Graph back = parse_gml(to_gml(g));
        CHECK(same_graph(g, back));
        const auto& a = back.node(*back.index_of(R(1))).attrs;
        CHECK(std::get<std::string>(a.at("topics")) == "Sustainable Urban Planning; Urban Transport and Accessibility");
        CHECK(std::get<std::string>(a.at("title")).find("\"15-Minute City\"") != std::string::npos);
    }

    TEST_CASE("quotes are doubled in GML strings")
    {
        Graph g(true);
        g.add_node("n", {{"title", std::string("say \"hi\"")}});
        CHECK(to_gml(g).find("title \"say \"\"hi\"\"\"") != std::string::npos);
    }

    TEST_CASE("unrepresentable attributes name node and key")
    {
        Graph g(true);
        g.add_node("n1", {{"bad key", std::string("v")}});
        try {
            to_gml(g);
            FAIL("expected a serialization error");
        } catch (const SerializationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("n1") != std::string::npos);
            CHECK(msg.find("bad key") != std::string::npos);
        }
        Graph h(true);
        h.add_node("n2", {{"score", std::numeric_limits<double>::quiet_NaN()}});
        CHECK_THROWS_AS(to_gml(h), SerializationError);
        Graph r(true);
        r.add_node("n3", {{"source", std::string("x")}});
        CHECK_THROWS_AS(to_gml(r), SerializationError);
    }

    TEST_CASE("malformed GML is a decode error")
    {
        CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ]"), DecodeError);
        CHECK_THROWS_AS(parse_gml("nothing here 1"), DecodeError);
        CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 ] edge [ source 0 target 7 ] ]"), DecodeError);
        CHECK_THROWS_AS(parse_gml("graph [ node [ label \"x\" ] ]"), DecodeError);
        CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 label \"unterminated ] ]"), DecodeError);
    }

    TEST_CASE("golden Gephi export loads")
    {
        const Graph g = read_gml(testsupport::data_dir() / "golden.gml");
        CHECK(g.directed());
        CHECK_FALSE(g.weighted());
        CHECK(g.node_count() == 4);
        CHECK(g.edge_count() == 5);
        const auto r1 = *g.index_of("W4301000001");
        const auto& a = g.node(r1).attrs;
        CHECK(std::get<std::string>(a.at("title")) == "Introducing the \"15-Minute City\"");
        CHECK(std::get<std::int64_t>(a.at("citation_count")) == 120);
        CHECK(std::get<double>(a.at("page_rank")) == 0.3125);
        CHECK(a.count("graphics") == 0);
        CHECK(std::get<std::string>(g.node(*g.index_of("W4301000002")).attrs.at("title")) ==
              "Net zero & proximity");
        CHECK(std::get<std::string>(g.node(*g.index_of("W2901000001")).attrs.at("title")) ==
              "Walkability in São Paulo");
        CHECK(std::get<std::string>(g.node(*g.index_of("W2901000002")).attrs.at("title")) ==
              "Mixed land use in München");
        CHECK(g.has_edge(*g.index_of("W2901000001"), r1));
        CHECK(g.out_degree(r1) == 3);
        CHECK(same_graph(parse_gml(to_gml(g)), g));
    }
}
