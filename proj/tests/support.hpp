#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "citenet/graph.hpp"
#include "citenet/openalex_client.hpp"

namespace testsupport {

inline std::filesystem::path data_dir()
{
    return CITENET_TEST_DATA;
}

inline std::filesystem::path fixture_dir()
{
    return data_dir() / "fixtures";
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("citenet_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// The 15-work corpus harvested from the recorded fixture responses.
inline const citenet::Corpus& fixture_corpus()
{
    static const citenet::Corpus corpus = [] {
        TempDir dir("fixture_corpus");
        citenet::ClientOptions o;
        o.cache_dir = dir / "cache";
        o.fixture_dir = fixture_dir();
        citenet::OpenAlexClient client(o);
        citenet::HarvestRequest req;
        req.queries = {"15 minute city", "15 min city"};
        req.mail = "tester@example.org";
        req.from_date = "2019-01-01";
        req.output_dir = dir.path();
        return citenet::load_corpus(citenet::retrieve_articles(client, req));
    }();
    return corpus;
}

/// Directed or undirected graph on n nodes "v0".."v{n-1}" with each ordered
/// (or unordered) pair present with probability p.
inline citenet::Graph random_graph(std::mt19937_64& rng, std::size_t n, double p, bool directed)
{
    citenet::Graph g(directed);
    for (std::size_t i = 0; i < n; ++i) {
        g.add_node("v" + std::to_string(i));
    }
    std::bernoulli_distribution coin(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
            if (i != j && coin(rng)) {
                g.add_edge(i, j);
            }
        }
    }
    return g;
}

inline std::size_t count_matches(const std::string& text, const std::string& pattern)
{
    const std::regex re(pattern);
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                  std::sregex_iterator()));
}

inline std::vector<std::smatch> all_matches(const std::string& text, const std::string& pattern)
{
    const std::regex re(pattern);
    std::vector<std::smatch> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
        out.push_back(*it);
    }
    return out;
}

} // namespace testsupport
