#include "citenet/openalex_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <set>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "citenet/error.hpp"
#include "citenet/hash.hpp"
#include "citenet/io.hpp"

namespace citenet {

using nlohmann::json;

namespace {

std::string utc_now_iso()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string utc_today()
{
    return utc_now_iso().substr(0, 10);
}

std::string upstream_message(const std::string& body)
{
    try {
        auto j = json::parse(body);
        std::string msg = j.value("error", std::string{});
        std::string detail = j.value("message", std::string{});
        if (!msg.empty() && !detail.empty()) {
            return msg + ": " + detail;
        }
        if (!msg.empty() || !detail.empty()) {
            return msg + detail;
        }
    } catch (const json::exception&) {
    }
    return body.substr(0, 300);
}

} // namespace

// ---------------------------------------------------------------------------
// HttplibTransport

HttplibTransport::HttplibTransport(std::string base_url, std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout)
{
}

HttpResponse HttplibTransport::get(const std::string& target)
{
    httplib::Client cli(base_url_);
    cli.set_connection_timeout(timeout_);
    cli.set_read_timeout(timeout_);
    cli.set_follow_location(true);
    auto res = cli.Get(target);
    if (!res) {
        throw TransientFailureError(fmt::format("GET {}{} failed: {}", base_url_, target, httplib::to_string(res.error())));
    }
    return HttpResponse{res->status, res->body};
}

// ---------------------------------------------------------------------------
// Cache

CachedResponse parse_cached_response(const std::string& text)
{
    try {
        auto j = json::parse(text);
        CachedResponse entry;
        entry.key = j.at("key").get<std::string>();
        entry.fetched_at = j.value("fetched_at", std::string{});
        entry.spec = j.value("spec", json::object());
        entry.payload = j.at("payload");
        if (!entry.payload.is_object() || !entry.payload.contains("results") || !entry.payload["results"].is_array()) {
            throw DecodeError(fmt::format("cached response {}: payload lacks a results array", entry.key));
        }
        return entry;
    } catch (const json::exception& e) {
        throw DecodeError(fmt::format("cached response: {}", e.what()));
    }
}

std::string dump_cached_response(const CachedResponse& entry)
{
    json j = {{"key", entry.key}, {"fetched_at", entry.fetched_at}, {"spec", entry.spec}, {"payload", entry.payload}};
    return j.dump(1) + "\n";
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const
{
    return dir_ / (key + ".json");
}

std::optional<CachedResponse> ResponseCache::get(const std::string& key) const
{
    const auto path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        return std::nullopt;
    }
    try {
        return parse_cached_response(read_file(path));
    } catch (const Error& e) {
        spdlog::warn("ignoring unreadable cache entry {}: {}", path.string(), e.what());
        return std::nullopt;
    }
}

void ResponseCache::put(const CachedResponse& entry) const
{
    write_file_atomic(path_for(entry.key), dump_cached_response(entry));
}

// ---------------------------------------------------------------------------
// RequestBudget

RequestBudget::RequestBudget(std::size_t per_day, std::optional<std::filesystem::path> state_file)
    : per_day_(per_day), state_file_(std::move(state_file)), day_(utc_today())
{
    if (state_file_) {
        std::error_code ec;
        if (std::filesystem::exists(*state_file_, ec)) {
            try {
                auto j = json::parse(read_file(*state_file_));
                if (j.value("day", std::string{}) == day_) {
                    used_ = j.value("used", std::size_t{0});
                }
            } catch (const std::exception& e) {
                spdlog::warn("resetting unreadable request budget {}: {}", state_file_->string(), e.what());
            }
        }
    }
}

void RequestBudget::roll_day()
{
    auto today = utc_today();
    if (today != day_) {
        day_ = std::move(today);
        used_ = 0;
    }
}

void RequestBudget::consume()
{
    std::lock_guard lock(mu_);
    roll_day();
    if (used_ >= per_day_) {
        throw BudgetExceededError(fmt::format("daily request budget of {} exhausted", per_day_));
    }
    ++used_;
    if (state_file_) {
        try {
            write_file_atomic(*state_file_, json{{"day", day_}, {"used", used_}}.dump());
        } catch (const Error& e) {
            spdlog::warn("cannot persist request budget: {}", e.what());
        }
    }
}

std::size_t RequestBudget::used_today() const
{
    std::lock_guard lock(mu_);
    return used_;
}

// ---------------------------------------------------------------------------
// Options

ClientOptions ClientOptions::from_env()
{
    ClientOptions o;
    if (const char* dir = std::getenv("CITENET_CACHE_DIR"); dir && *dir) {
        o.cache_dir = dir;
    }
    if (const char* budget = std::getenv("CITENET_BUDGET"); budget && *budget) {
        try {
            o.daily_budget = std::stoull(budget);
        } catch (const std::exception&) {
            throw ParameterError(fmt::format("CITENET_BUDGET must be a non-negative integer, got '{}'", budget));
        }
    }
    if (const char* fixtures = std::getenv("CITENET_FIXTURES"); fixtures && *fixtures) {
        o.fixture_dir = std::filesystem::path(fixtures);
    }
    return o;
}

// ---------------------------------------------------------------------------
// Request construction

std::string url_encode(std::string_view text)
{
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

std::string build_request_target(const QuerySpec& spec, int per_page, const std::string& cursor)
{
    std::string filter;
    switch (spec.api_type) {
    case ApiType::search:
        filter = "title_and_abstract.search:" + *spec.parameter;
        if (spec.from_publication_date) {
            filter += ",from_publication_date:" + *spec.from_publication_date;
        }
        if (spec.to_publication_date) {
            filter += ",to_publication_date:" + *spec.to_publication_date;
        }
        break;
    case ApiType::cite:
        filter = "cites:" + *spec.parameter;
        break;
    case ApiType::cited_by:
        filter = "cited_by:" + *spec.parameter;
        break;
    }
    std::string target = "/works?filter=" + url_encode(filter);
    target += fmt::format("&per-page={}&cursor={}", per_page, url_encode(cursor));
    if (!spec.mail.empty()) {
        target += "&mailto=" + url_encode(spec.mail);
    }
    return target;
}

// ---------------------------------------------------------------------------
// OpenAlexClient

OpenAlexClient::OpenAlexClient(ClientOptions options, std::shared_ptr<HttpTransport> transport)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      cache_(options_.cache_dir),
      budget_(options_.daily_budget,
              options_.fixture_dir ? std::nullopt : std::optional(options_.cache_dir / "budget.json"))
{
    if (!options_.sleep) {
        options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    if (!options_.clock) {
        options_.clock = utc_now_iso;
    }
    if (!transport_ && !options_.fixture_dir) {
        transport_ = std::make_shared<HttplibTransport>();
    }
}

json OpenAlexClient::get_page(const std::string& target)
{
    auto backoff = options_.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        budget_.consume();
        ++upstream_requests_;
        HttpResponse res;
        try {
            res = transport_->get(target);
        } catch (const TransientFailureError& e) {
            last_error = e.what();
            res.status = 0;
        }
        if (res.status >= 200 && res.status < 300) {
            try {
                return json::parse(res.body);
            } catch (const json::exception& e) {
                throw DecodeError(fmt::format("malformed response for {}: {}", target, e.what()));
            }
        }
        if (res.status != 0 && res.status != 429 && res.status < 500) {
            throw QueryRejectedError(fmt::format("upstream rejected {} ({}): {}", target, res.status,
                                                 upstream_message(res.body)));
        }
        if (res.status != 0) {
            last_error = fmt::format("status {}: {}", res.status, upstream_message(res.body));
        }
        if (attempt < options_.max_attempts) {
            spdlog::debug("retrying {} after {} ms ({})", target, backoff.count(), last_error);
            options_.sleep(backoff);
            backoff *= 2;
        }
    }
    throw TransientFailureError(fmt::format("giving up on {} after {} attempts: {}", target,
                                            options_.max_attempts, last_error));
}

CachedResponse OpenAlexClient::fetch_live(const QuerySpec& spec)
{
    json results = json::array();
    std::string cursor = "*";
    std::set<std::string> seen_cursors;
    while (true) {
        const json page = get_page(build_request_target(spec, options_.per_page, cursor));
        if (!page.is_object() || !page.contains("results") || !page["results"].is_array()) {
            throw DecodeError(fmt::format("response for {} lacks a results array", spec.canonical()));
        }
        for (const auto& r : page["results"]) {
            results.push_back(r);
        }
        const json* next = nullptr;
        if (auto meta = page.find("meta"); meta != page.end() && meta->is_object()) {
            if (auto nc = meta->find("next_cursor"); nc != meta->end() && nc->is_string()) {
                next = &*nc;
            }
        }
        if (!next || page["results"].empty()) {
            break;
        }
        cursor = next->get<std::string>();
        if (!seen_cursors.insert(cursor).second) {
            throw DecodeError("upstream returned a repeated pagination cursor");
        }
    }
    CachedResponse entry;
    entry.key = spec.cache_key();
    entry.fetched_at = options_.clock();
    entry.spec = json::parse(spec.canonical());
    entry.payload = json{{"results", std::move(results)}};
    return entry;
}

CachedResponse OpenAlexClient::fetch_replay(const QuerySpec& spec)
{
    const auto key = spec.cache_key();
    const auto path = *options_.fixture_dir / (key + ".json");
    ++upstream_requests_;
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        throw TransientFailureError(fmt::format("no recorded response for {} ({})", spec.canonical(), key));
    }
    return parse_cached_response(read_file(path));
}

CachedResponse OpenAlexClient::fetch(const QuerySpec& spec)
{
    spec.validate();
    const auto key = spec.cache_key();
    if (spec.cache) {
        if (auto hit = cache_.get(key)) {
            return *hit;
        }
    }
    CachedResponse entry = options_.fixture_dir ? fetch_replay(spec) : fetch_live(spec);
    if (spec.cache) {
        cache_.put(entry);
    }
    return entry;
}

std::vector<json> OpenAlexClient::query_openalex(const QuerySpec& spec)
{
    auto entry = fetch(spec);
    auto& results = entry.payload["results"];
    return {std::make_move_iterator(results.begin()), std::make_move_iterator(results.end())};
}

// ---------------------------------------------------------------------------
// Record conversion

std::string short_openalex_id(std::string_view id)
{
    const auto slash = id.rfind('/');
    return std::string(slash == std::string_view::npos ? id : id.substr(slash + 1));
}

std::string reconstruct_abstract(const std::map<std::string, std::vector<long long>>& inverted_index)
{
    std::map<long long, const std::string*> placed;
    for (const auto& [term, positions] : inverted_index) {
        for (long long pos : positions) {
            if (pos < 0) {
                throw DecodeError(fmt::format("abstract index: negative position {} for '{}'", pos, term));
            }
            auto [it, inserted] = placed.emplace(pos, &term);
            if (!inserted && *it->second != term) {
                throw AbstractConflictError(fmt::format("abstract index: position {} claimed by both '{}' and '{}'",
                                                        pos, *it->second, term));
            }
        }
    }
    std::string out;
    for (const auto& [pos, term] : placed) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += *term;
    }
    return out;
}

std::string reconstruct_abstract(const json& inverted_index)
{
    std::map<std::string, std::vector<long long>> index;
    if (inverted_index.is_null()) {
        return {};
    }
    try {
        for (auto it = inverted_index.begin(); it != inverted_index.end(); ++it) {
            index[it.key()] = it.value().get<std::vector<long long>>();
        }
    } catch (const json::exception& e) {
        throw DecodeError(fmt::format("abstract index: {}", e.what()));
    }
    return reconstruct_abstract(index);
}

namespace {

std::optional<std::string> opt_string(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        return std::nullopt;
    }
    return it->get<std::string>();
}

std::string nested_name(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || !it->is_object()) {
        return {};
    }
    return opt_string(*it, "display_name").value_or("");
}

TopicAssignment topic_from(const json& t)
{
    return TopicAssignment{opt_string(t, "display_name").value_or(""), nested_name(t, "subfield"),
                           nested_name(t, "field"), nested_name(t, "domain")};
}

} // namespace

Work work_from_openalex(const json& record)
{
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string()) {
        throw DecodeError("work record without an id");
    }
    try {
        Work w;
        w.id = short_openalex_id(record["id"].get<std::string>());
        w.doi = opt_string(record, "doi");
        w.title = opt_string(record, "title").value_or(opt_string(record, "display_name").value_or(""));
        w.publication_date = opt_string(record, "publication_date").value_or("");
        w.language = opt_string(record, "language");
        w.type = opt_string(record, "type").value_or("");
        if (auto loc = record.find("primary_location"); loc != record.end() && loc->is_object()) {
            if (auto src = loc->find("source"); src != loc->end() && src->is_object() && src->contains("id")) {
                w.venue = Venue{short_openalex_id((*src)["id"].get<std::string>()),
                                opt_string(*src, "display_name").value_or("")};
            }
        }
        for (const auto& a : record.value("authorships", json::array())) {
            const json author = a.value("author", json::object());
            auto aid = opt_string(author, "id");
            if (!aid || aid->empty()) {
                continue;
            }
            Authorship au;
            au.author_id = short_openalex_id(*aid);
            au.display_name = opt_string(author, "display_name").value_or("");
            for (const auto& c : a.value("countries", json::array())) {
                if (c.is_string()) {
                    au.country = c.get<std::string>();
                    break;
                }
            }
            for (const auto& i : a.value("institutions", json::array())) {
                auto iid = opt_string(i, "id");
                if (!iid) {
                    continue;
                }
                InstitutionRef ref{short_openalex_id(*iid), opt_string(i, "display_name").value_or(""),
                                   opt_string(i, "country_code")};
                if (!au.country && ref.country) {
                    au.country = ref.country;
                }
                au.institutions.push_back(std::move(ref));
            }
            w.authorships.push_back(std::move(au));
        }
        for (const auto& t : record.value("topics", json::array())) {
            w.topics.push_back(topic_from(t));
        }
        if (w.topics.empty()) {
            if (auto pt = record.find("primary_topic"); pt != record.end() && pt->is_object()) {
                w.topics.push_back(topic_from(*pt));
            }
        }
        for (const auto& k : record.value("keywords", json::array())) {
            if (auto name = opt_string(k, "display_name")) {
                w.keywords.push_back(*name);
            }
        }
        if (auto b = record.find("biblio"); b != record.end() && b->is_object()) {
            w.biblio = Biblio{opt_string(*b, "volume"), opt_string(*b, "issue"), opt_string(*b, "first_page"),
                              opt_string(*b, "last_page")};
        }
        if (auto idx = record.find("abstract_inverted_index"); idx != record.end() && idx->is_object()) {
            try {
                w.abstract = reconstruct_abstract(*idx);
            } catch (const AbstractConflictError& e) {
                spdlog::warn("work {}: dropping abstract: {}", w.id, e.what());
            }
        }
        if (auto c = record.find("cited_by_count"); c != record.end() && c->is_number_integer()) {
            w.citation_count = std::max<std::int64_t>(0, c->get<std::int64_t>());
        }
        return w;
    } catch (const json::exception& e) {
        throw DecodeError(fmt::format("work record: {}", e.what()));
    }
}

// ---------------------------------------------------------------------------
// Harvest

std::string HarvestRequest::digest() const
{
    json j = {{"queries", queries},
              {"from_publication_date", from_date ? json(*from_date) : json(nullptr)},
              {"to_publication_date", to_date ? json(*to_date) : json(nullptr)}};
    return sha224_hex(j.dump());
}

std::filesystem::path HarvestRequest::corpus_path() const
{
    return output_dir / "query_results" / ("query_result_" + digest() + ".json");
}

bool is_valid_mail(std::string_view mail)
{
    const auto at = mail.find('@');
    if (at == std::string_view::npos || at == 0 || mail.find('@', at + 1) != std::string_view::npos) {
        return false;
    }
    const auto domain = mail.substr(at + 1);
    const auto dot = domain.find('.');
    if (domain.empty() || dot == std::string_view::npos || dot == 0 || domain.back() == '.') {
        return false;
    }
    return std::none_of(mail.begin(), mail.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

Corpus harvest_corpus(OpenAlexClient& client, const HarvestRequest& request)
{
    if (request.queries.empty()) {
        throw InvalidQueryError("retrieve_articles needs at least one query");
    }
    if (!is_valid_mail(request.mail)) {
        throw InvalidQueryError(fmt::format("'{}' is not a valid contact mail address", request.mail));
    }
    std::lock_guard lock(client.harvest_mutex());

    Corpus corpus;
    std::string newest;
    auto note_time = [&](const std::string& t) { newest = std::max(newest, t); };

    std::vector<std::string> roots;
    for (const auto& q : request.queries) {
        QuerySpec spec;
        spec.api_type = ApiType::search;
        spec.parameter = q;
        spec.mail = request.mail;
        spec.from_publication_date = request.from_date;
        spec.to_publication_date = request.to_date;
        spec.cache = request.cache;
        auto entry = client.fetch(spec);
        note_time(entry.fetched_at);
        corpus.query_provenance.push_back(spec);
        for (const auto& rec : entry.payload["results"]) {
            Work w = work_from_openalex(rec);
            w.is_root = true;
            if (corpus.works.emplace(w.id, w).second) {
                roots.push_back(w.id);
            }
        }
    }
    if (roots.empty()) {
        spdlog::warn("empty corpus: no root-set works matched the queries");
    }
    std::sort(roots.begin(), roots.end());

    auto neighbours = [&](const std::string& id, ApiType type) -> std::optional<std::vector<std::string>> {
        QuerySpec spec;
        spec.api_type = type;
        spec.parameter = id;
        spec.mail = request.mail;
        spec.cache = request.cache;
        try {
            auto entry = client.fetch(spec);
            note_time(entry.fetched_at);
            std::vector<std::string> ids;
            std::unordered_set<std::string> seen;
            for (const auto& rec : entry.payload["results"]) {
                Work w = work_from_openalex(rec);
                if (w.id == id || !seen.insert(w.id).second) {
                    continue;
                }
                ids.push_back(w.id);
                if (!corpus.works.count(w.id)) {
                    w.is_root = false;
                    corpus.works.emplace(w.id, std::move(w));
                }
            }
            return ids;
        } catch (const BudgetExceededError&) {
            throw;
        } catch (const Error& e) {
            spdlog::warn("fetch {} for {} failed: {}", to_string(type), id, e.what());
            corpus.fetch_log.push_back(FetchLogEntry{id, std::string(to_string(type)), e.what()});
            return std::nullopt;
        }
    };

    for (const auto& id : roots) {
        // Table 5 naming: `cite` lists works citing the parameter, `cited_by`
        // the works it cites.
        auto incoming = neighbours(id, ApiType::cite);
        auto outgoing = neighbours(id, ApiType::cited_by);
        Work& w = corpus.works.at(id);
        if (incoming) {
            w.cited_by = std::move(*incoming);
        }
        if (outgoing) {
            w.cite = std::move(*outgoing);
        }
    }
    corpus.fetched_at = newest;
    return corpus;
}

std::filesystem::path retrieve_articles(OpenAlexClient& client, const HarvestRequest& request)
{
    Corpus corpus = harvest_corpus(client, request);
    const auto path = request.corpus_path();
    save_corpus(corpus, path);
    return path;
}

} // namespace citenet
