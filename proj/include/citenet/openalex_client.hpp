#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/lite_regex.hpp"
#include "citenet/query_spec.hpp"
#include "json.hpp"

namespace citenet {

// ---------------------------------------------------------------------------
// Transport

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Issues GET requests for a path+query relative to the upstream base URL.
/// Implementations throw TransientFailureError for connection-level failures.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& target) = 0;
};

/// HTTPS transport against api.openalex.org.
class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(std::string base_url = "https://api.openalex.org",
                              std::chrono::seconds timeout = std::chrono::seconds(30));
    HttpResponse get(const std::string& target) override;

private:
    std::string base_url_;
    std::chrono::seconds timeout_;
};

// ---------------------------------------------------------------------------
// Cache

/// All pages of one query, merged: payload is {"results": [...]}.
struct CachedResponse {
    std::string key;
    std::string fetched_at;
    nlohmann::json spec;
    nlohmann::json payload;
};

/// One JSON file per cache key. Reads may run concurrently; writes go through
/// temp-file-then-rename.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<CachedResponse> get(const std::string& key) const;
    void put(const CachedResponse& entry) const;
    std::filesystem::path path_for(const std::string& key) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

CachedResponse parse_cached_response(const std::string& text);
std::string dump_cached_response(const CachedResponse& entry);

// ---------------------------------------------------------------------------
// Request budget

/// Requests-per-day ceiling, persisted as budget.json under the cache
/// directory so separate processes on the same day share it.
class RequestBudget {
public:
    RequestBudget(std::size_t per_day, std::optional<std::filesystem::path> state_file);

    /// Consumes one request. Throws BudgetExceededError when the day's budget
    /// is spent.
    void consume();
    std::size_t used_today() const;
    std::size_t per_day() const { return per_day_; }

private:
    void roll_day();

    std::size_t per_day_;
    std::optional<std::filesystem::path> state_file_;
    std::string day_;
    std::size_t used_ = 0;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Client

struct ClientOptions {
    std::filesystem::path cache_dir = ".citenet_cache";
    /// When set, responses are replayed from recorded files named
    /// <cache-key>.json in this directory instead of going to the network.
    std::optional<std::filesystem::path> fixture_dir;
    std::size_t daily_budget = 100000;
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    int per_page = 200;
    std::function<void(std::chrono::milliseconds)> sleep;
    std::function<std::string()> clock;

    /// Defaults overridden by CITENET_CACHE_DIR, CITENET_BUDGET and
    /// CITENET_FIXTURES.
    static ClientOptions from_env();
};

class OpenAlexClient {
public:
    explicit OpenAlexClient(ClientOptions options, std::shared_ptr<HttpTransport> transport = nullptr);

    /// All works matching `spec`, pagination exhausted. Served from the cache
    /// when spec.cache is set and an entry exists.
    std::vector<nlohmann::json> query_openalex(const QuerySpec& spec);

    /// As query_openalex, plus the fetch time of the response.
    CachedResponse fetch(const QuerySpec& spec);

    /// Upstream requests performed so far (HTTP pages, or replayed fixture
    /// reads in fixture mode). Cache hits do not count.
    std::size_t upstream_requests() const { return upstream_requests_.load(); }

    const ClientOptions& options() const { return options_; }

    /// Serialises harvests on this client.
    std::mutex& harvest_mutex() { return harvest_mu_; }

private:
    CachedResponse fetch_live(const QuerySpec& spec);
    CachedResponse fetch_replay(const QuerySpec& spec);
    nlohmann::json get_page(const std::string& target);

    ClientOptions options_;
    std::shared_ptr<HttpTransport> transport_;
    ResponseCache cache_;
    RequestBudget budget_;
    std::atomic<std::size_t> upstream_requests_{0};
    std::mutex harvest_mu_;
};

/// Path+query for one page of `spec`.
std::string build_request_target(const QuerySpec& spec, int per_page, const std::string& cursor);

std::string url_encode(std::string_view text);

/// Strips the "https://openalex.org/" prefix from entity ids.
std::string short_openalex_id(std::string_view id);

/// Converts one upstream work object into a corpus Work (citation lists and
/// root flag left empty).
Work work_from_openalex(const nlohmann::json& record);

/// Rebuilds abstract text from term -> positions. Terms are ordered by
/// position and joined with single spaces. Throws AbstractConflictError if two
/// terms claim one position, DecodeError on a negative position.
std::string reconstruct_abstract(const std::map<std::string, std::vector<long long>>& inverted_index);
std::string reconstruct_abstract(const nlohmann::json& inverted_index);

struct HarvestRequest {
    std::vector<std::string> queries;
    std::string mail;
    std::optional<std::string> from_date;
    std::optional<std::string> to_date;
    bool cache = true;
    /// The corpus file goes to <output_dir>/query_results/.
    std::filesystem::path output_dir = ".";

    /// Digest of the canonical (queries, from, to) tuple.
    std::string digest() const;
    std::filesystem::path corpus_path() const;
};

/// Fetches the root set for every query, then each root work's incoming
/// (`cite`) and outgoing (`cited_by`) neighbours, and writes one corpus file.
/// Per-work neighbour failures land in the corpus fetch log.
std::filesystem::path retrieve_articles(OpenAlexClient& client, const HarvestRequest& request);

/// The corpus retrieve_articles would write, without touching the filesystem.
Corpus harvest_corpus(OpenAlexClient& client, const HarvestRequest& request);

/// Light syntactic check: one '@', non-empty local part, dotted domain.
bool is_valid_mail(std::string_view mail);

} // namespace citenet
