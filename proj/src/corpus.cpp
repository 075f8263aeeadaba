#include "citenet/corpus.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "citenet/csv.hpp"
#include "citenet/date.hpp"
#include "citenet/error.hpp"
#include "citenet/io.hpp"

namespace citenet {

using nlohmann::json;

const std::string kMetaKey = "_meta";

TopicLevel topic_level_from_string(std::string_view text)
{
    if (text == "topic") return TopicLevel::topic;
    if (text == "subfield") return TopicLevel::subfield;
    if (text == "field") return TopicLevel::field;
    if (text == "domain") return TopicLevel::domain;
    throw ParameterError(fmt::format("invalid topic level '{}' (expected topic, subfield, field, domain)", text));
}

std::string_view to_string(TopicLevel level)
{
    switch (level) {
    case TopicLevel::topic: return "topic";
    case TopicLevel::subfield: return "subfield";
    case TopicLevel::field: return "field";
    case TopicLevel::domain: return "domain";
    }
    return "topic";
}

const std::string& topic_at(const TopicAssignment& t, TopicLevel level)
{
    switch (level) {
    case TopicLevel::topic: return t.topic;
    case TopicLevel::subfield: return t.subfield;
    case TopicLevel::field: return t.field;
    case TopicLevel::domain: return t.domain;
    }
    return t.topic;
}

std::size_t Corpus::root_count() const
{
    return static_cast<std::size_t>(
        std::count_if(works.begin(), works.end(), [](const auto& kv) { return kv.second.is_root; }));
}

std::size_t Corpus::base_count() const
{
    return works.size() - root_count();
}

const Work* Corpus::find(const std::string& id) const
{
    auto it = works.find(id);
    return it == works.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// JSON mapping

namespace {

json opt_to_json(const std::optional<std::string>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::optional<std::string> opt_from_json(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->get<std::string>();
}

template <typename T>
T value_or(const json& j, const char* key, T fallback)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return fallback;
    }
    return it->get<T>();
}

} // namespace

void to_json(json& j, const Work& w)
{
    json authorships = json::array();
    for (const auto& a : w.authorships) {
        json inst = json::array();
        for (const auto& i : a.institutions) {
            inst.push_back({{"id", i.id}, {"display_name", i.display_name}, {"country", opt_to_json(i.country)}});
        }
        authorships.push_back({{"author_id", a.author_id},
                               {"display_name", a.display_name},
                               {"country", opt_to_json(a.country)},
                               {"institutions", std::move(inst)}});
    }
    json topics = json::array();
    for (const auto& t : w.topics) {
        topics.push_back({{"topic", t.topic}, {"subfield", t.subfield}, {"field", t.field}, {"domain", t.domain}});
    }
    j = json::object();
    j["id"] = w.id;
    j["doi"] = opt_to_json(w.doi);
    j["title"] = w.title;
    j["publication_date"] = w.publication_date;
    j["language"] = opt_to_json(w.language);
    j["type"] = w.type;
    j["venue"] = w.venue ? json{{"id", w.venue->id}, {"display_name", w.venue->display_name}} : json(nullptr);
    j["authorships"] = std::move(authorships);
    j["topics"] = std::move(topics);
    j["keywords"] = w.keywords;
    j["biblio"] = {{"volume", opt_to_json(w.biblio.volume)},
                   {"issue", opt_to_json(w.biblio.issue)},
                   {"first_page", opt_to_json(w.biblio.first_page)},
                   {"last_page", opt_to_json(w.biblio.last_page)}};
    j["cited_by"] = w.cited_by;
    j["cite"] = w.cite;
    j["abstract"] = opt_to_json(w.abstract);
    j["citation_count"] = w.citation_count;
    j["is_root"] = w.is_root;
}

void from_json(const json& j, Work& w)
{
    w.id = j.at("id").get<std::string>();
    w.doi = opt_from_json(j, "doi");
    w.title = value_or<std::string>(j, "title", "");
    w.publication_date = value_or<std::string>(j, "publication_date", "");
    w.language = opt_from_json(j, "language");
    w.type = value_or<std::string>(j, "type", "");
    w.venue.reset();
    if (auto it = j.find("venue"); it != j.end() && !it->is_null()) {
        w.venue = Venue{it->at("id").get<std::string>(), value_or<std::string>(*it, "display_name", "")};
    }
    w.authorships.clear();
    for (const auto& a : j.value("authorships", json::array())) {
        Authorship au;
        au.author_id = value_or<std::string>(a, "author_id", "");
        au.display_name = value_or<std::string>(a, "display_name", "");
        au.country = opt_from_json(a, "country");
        for (const auto& i : a.value("institutions", json::array())) {
            au.institutions.push_back(InstitutionRef{i.at("id").get<std::string>(),
                                                     value_or<std::string>(i, "display_name", ""),
                                                     opt_from_json(i, "country")});
        }
        w.authorships.push_back(std::move(au));
    }
    w.topics.clear();
    for (const auto& t : j.value("topics", json::array())) {
        w.topics.push_back(TopicAssignment{value_or<std::string>(t, "topic", ""), value_or<std::string>(t, "subfield", ""),
                                           value_or<std::string>(t, "field", ""), value_or<std::string>(t, "domain", "")});
    }
    w.keywords = j.value("keywords", std::vector<std::string>{});
    w.biblio = {};
    if (auto it = j.find("biblio"); it != j.end() && it->is_object()) {
        w.biblio.volume = opt_from_json(*it, "volume");
        w.biblio.issue = opt_from_json(*it, "issue");
        w.biblio.first_page = opt_from_json(*it, "first_page");
        w.biblio.last_page = opt_from_json(*it, "last_page");
    }
    w.cited_by = j.value("cited_by", std::vector<std::string>{});
    w.cite = j.value("cite", std::vector<std::string>{});
    w.abstract = opt_from_json(j, "abstract");
    w.citation_count = value_or<std::int64_t>(j, "citation_count", 0);
    w.is_root = value_or<bool>(j, "is_root", false);
}

std::string dump_corpus(const Corpus& corpus)
{
    json root = json::object();
    for (const auto& [id, work] : corpus.works) {
        root[id] = work;
    }
    const bool has_meta = !corpus.query_provenance.empty() || !corpus.fetched_at.empty() || !corpus.fetch_log.empty();
    if (has_meta) {
        json log = json::array();
        for (const auto& e : corpus.fetch_log) {
            log.push_back({{"work_id", e.work_id}, {"api_type", e.api_type}, {"message", e.message}});
        }
        root[kMetaKey] = {{"query_provenance", corpus.query_provenance},
                          {"fetched_at", corpus.fetched_at},
                          {"fetch_log", std::move(log)}};
    }
    return root.dump(2) + "\n";
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path)
{
    write_file_atomic(path, dump_corpus(corpus));
}

namespace {

void check_unique(const std::vector<std::string>& ids, const std::string& work_id, const char* list)
{
    std::unordered_set<std::string> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw LoadError(fmt::format("work {}: duplicate id '{}' in {} list", work_id, id, list));
        }
    }
}

void validate_work(const Work& w)
{
    check_unique(w.cited_by, w.id, "cited_by");
    check_unique(w.cite, w.id, "cite");
    for (const auto& a : w.authorships) {
        if (a.author_id.empty()) {
            throw LoadError(fmt::format("work {}: authorship with empty author id", w.id));
        }
    }
    for (const auto& t : w.topics) {
        const bool any = !t.topic.empty() || !t.subfield.empty() || !t.field.empty() || !t.domain.empty();
        const bool all = !t.topic.empty() && !t.subfield.empty() && !t.field.empty() && !t.domain.empty();
        if (any && !all) {
            throw LoadError(fmt::format("work {}: topic '{}' is missing hierarchy levels", w.id, t.topic));
        }
    }
    if (!w.publication_date.empty() && !parse_date(w.publication_date)) {
        throw LoadError(fmt::format("work {}: invalid publication_date '{}'", w.id, w.publication_date));
    }
    if (w.citation_count < 0) {
        throw LoadError(fmt::format("work {}: negative citation_count", w.id));
    }
}

} // namespace

Corpus parse_corpus(std::string_view text)
{
    std::optional<std::string> duplicate;
    std::set<std::string> top_keys;
    json::parser_callback_t on_event = [&](int depth, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::key && depth == 1) {
            auto key = parsed.get<std::string>();
            if (!top_keys.insert(key).second && !duplicate) {
                duplicate = key;
            }
        }
        return true;
    };

    json root;
    try {
        root = json::parse(text.begin(), text.end(), on_event);
    } catch (const json::exception& e) {
        throw DecodeError(fmt::format("corpus: {}", e.what()));
    }
    if (duplicate) {
        throw LoadError(fmt::format("work {}: duplicate work id", *duplicate));
    }
    if (!root.is_object()) {
        throw DecodeError("corpus: top-level value must be an object keyed by work id");
    }

    Corpus corpus;
    std::unordered_set<std::string> logged;
    try {
        for (auto it = root.begin(); it != root.end(); ++it) {
            if (it.key() == kMetaKey) {
                const json& meta = it.value();
                corpus.fetched_at = meta.value("fetched_at", std::string{});
                for (const auto& q : meta.value("query_provenance", json::array())) {
                    corpus.query_provenance.push_back(q.get<QuerySpec>());
                }
                for (const auto& e : meta.value("fetch_log", json::array())) {
                    corpus.fetch_log.push_back(FetchLogEntry{e.value("work_id", std::string{}),
                                                             e.value("api_type", std::string{}),
                                                             e.value("message", std::string{})});
                    logged.insert(corpus.fetch_log.back().work_id);
                }
                continue;
            }
            Work w = it.value().get<Work>();
            if (w.id != it.key()) {
                throw LoadError(fmt::format("work {}: record id '{}' does not match its key", it.key(), w.id));
            }
            validate_work(w);
            corpus.works.emplace(w.id, std::move(w));
        }
    } catch (const json::exception& e) {
        throw DecodeError(fmt::format("corpus: {}", e.what()));
    }

    std::set<std::string> dangling;
    for (const auto& [id, w] : corpus.works) {
        for (const auto* list : {&w.cited_by, &w.cite}) {
            for (const auto& ref : *list) {
                if (!corpus.works.count(ref) && !logged.count(ref)) {
                    dangling.insert(ref);
                }
            }
        }
    }
    corpus.dangling.assign(dangling.begin(), dangling.end());
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path)
{
    return parse_corpus(read_file(path));
}

// ---------------------------------------------------------------------------
// Derived entities

std::vector<VenueStats> collect_venues(const Corpus& corpus)
{
    std::map<std::string, VenueStats> venues;
    for (const auto& [id, w] : corpus.works) {
        if (!w.venue) {
            continue;
        }
        auto& v = venues[w.venue->id];
        v.id = w.venue->id;
        if (v.display_name.empty()) {
            v.display_name = w.venue->display_name;
        }
        (w.is_root ? v.root_count : v.base_count) += 1;
    }
    std::vector<VenueStats> out;
    for (auto& [_, v] : venues) {
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<InstitutionStats> collect_institutions(const Corpus& corpus)
{
    std::map<std::string, InstitutionStats> insts;
    for (const auto& [id, w] : corpus.works) {
        std::set<std::string> in_work;
        for (const auto& a : w.authorships) {
            for (const auto& i : a.institutions) {
                auto& s = insts[i.id];
                s.id = i.id;
                if (s.display_name.empty()) {
                    s.display_name = i.display_name;
                }
                if (s.country.empty() && i.country) {
                    s.country = *i.country;
                }
                in_work.insert(i.id);
            }
        }
        for (const auto& iid : in_work) {
            (w.is_root ? insts[iid].root_count : insts[iid].base_count) += 1;
        }
    }
    std::vector<InstitutionStats> out;
    for (auto& [_, s] : insts) {
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<AuthorStats> collect_authors(const Corpus& corpus)
{
    std::map<std::string, AuthorStats> authors;
    for (const auto& [id, w] : corpus.works) {
        std::set<std::string> in_work;
        for (const auto& a : w.authorships) {
            auto& s = authors[a.author_id];
            s.id = a.author_id;
            if (s.display_name.empty()) {
                s.display_name = a.display_name;
            }
            if (s.country.empty() && a.country) {
                s.country = *a.country;
            }
            for (const auto& i : a.institutions) {
                if (std::find(s.institutions.begin(), s.institutions.end(), i.display_name) == s.institutions.end()) {
                    s.institutions.push_back(i.display_name);
                }
            }
            if (in_work.insert(a.author_id).second) {
                (w.is_root ? s.root_count : s.base_count) += 1;
                s.citation_count += w.citation_count;
            }
        }
    }
    std::vector<AuthorStats> out;
    for (auto& [_, s] : authors) {
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exporters

namespace {

using ArticleGetter = std::function<std::string(const Work&)>;

template <typename Proj>
std::string join_authorships(const Work& w, Proj proj)
{
    std::vector<std::string> parts;
    for (const auto& a : w.authorships) {
        parts.push_back(proj(a));
    }
    return join_list(parts);
}

std::string join_topics(const Work& w, TopicLevel level)
{
    std::vector<std::string> parts;
    for (const auto& t : w.topics) {
        parts.push_back(topic_at(t, level));
    }
    return join_list(parts);
}

std::string primary_at(const Work& w, TopicLevel level)
{
    const auto* t = w.primary_topic();
    return t ? topic_at(*t, level) : std::string{};
}

std::string institutions_of(const Work& w)
{
    std::vector<std::string> names;
    for (const auto& a : w.authorships) {
        for (const auto& i : a.institutions) {
            if (std::find(names.begin(), names.end(), i.display_name) == names.end()) {
                names.push_back(i.display_name);
            }
        }
    }
    return join_list(names);
}

std::string year_of(const Work& w)
{
    auto d = parse_date(w.publication_date);
    return d ? std::to_string(d->year) : std::string{};
}

const std::vector<std::pair<std::string, ArticleGetter>>& article_getters()
{
    static const std::vector<std::pair<std::string, ArticleGetter>> getters = {
        {"id", [](const Work& w) { return w.id; }},
        {"doi", [](const Work& w) { return w.doi.value_or(""); }},
        {"title", [](const Work& w) { return w.title; }},
        {"publication_date", [](const Work& w) { return w.publication_date; }},
        {"year", year_of},
        {"language", [](const Work& w) { return w.language.value_or(""); }},
        {"type", [](const Work& w) { return w.type; }},
        {"venue", [](const Work& w) { return w.venue ? w.venue->display_name : std::string{}; }},
        {"venue_id", [](const Work& w) { return w.venue ? w.venue->id : std::string{}; }},
        {"authorships_display_name", [](const Work& w) { return join_authorships(w, [](const Authorship& a) { return a.display_name; }); }},
        {"authorships_author_id", [](const Work& w) { return join_authorships(w, [](const Authorship& a) { return a.author_id; }); }},
        {"authorships_country", [](const Work& w) { return join_authorships(w, [](const Authorship& a) { return a.country.value_or(""); }); }},
        {"institutions", institutions_of},
        {"topics", [](const Work& w) { return join_topics(w, TopicLevel::topic); }},
        {"subfields", [](const Work& w) { return join_topics(w, TopicLevel::subfield); }},
        {"fields", [](const Work& w) { return join_topics(w, TopicLevel::field); }},
        {"domains", [](const Work& w) { return join_topics(w, TopicLevel::domain); }},
        {"primary_topic", [](const Work& w) { return primary_at(w, TopicLevel::topic); }},
        {"primary_subfield", [](const Work& w) { return primary_at(w, TopicLevel::subfield); }},
        {"primary_field", [](const Work& w) { return primary_at(w, TopicLevel::field); }},
        {"primary_domain", [](const Work& w) { return primary_at(w, TopicLevel::domain); }},
        {"keywords", [](const Work& w) { return join_list(w.keywords); }},
        {"volume", [](const Work& w) { return w.biblio.volume.value_or(""); }},
        {"issue", [](const Work& w) { return w.biblio.issue.value_or(""); }},
        {"first_page", [](const Work& w) { return w.biblio.first_page.value_or(""); }},
        {"last_page", [](const Work& w) { return w.biblio.last_page.value_or(""); }},
        {"cited_by", [](const Work& w) { return join_list(w.cited_by); }},
        {"cite", [](const Work& w) { return join_list(w.cite); }},
        {"abstract", [](const Work& w) { return w.abstract.value_or(""); }},
        {"citation_count", [](const Work& w) { return std::to_string(w.citation_count); }},
        {"is_root", [](const Work& w) { return std::string(w.is_root ? "true" : "false"); }},
    };
    return getters;
}

std::vector<std::string> names_of(const std::vector<std::pair<std::string, ArticleGetter>>& getters)
{
    std::vector<std::string> names;
    for (const auto& [name, _] : getters) {
        names.push_back(name);
    }
    return names;
}

void require_fields(std::span<const std::string> fields, std::span<const std::string> valid, std::string_view what)
{
    for (const auto& f : fields) {
        if (std::find(valid.begin(), valid.end(), f) == valid.end()) {
            throw FieldError(fmt::format("unknown {} field '{}'; valid fields: {}", what, f,
                                         join_list(valid, ", ")));
        }
    }
}

std::vector<std::string> with_counts(std::span<const std::string> fields)
{
    std::vector<std::string> cols(fields.begin(), fields.end());
    for (const char* extra : {"root_count", "base_count"}) {
        if (std::find(cols.begin(), cols.end(), extra) == cols.end()) {
            cols.emplace_back(extra);
        }
    }
    return cols;
}

} // namespace

std::span<const std::string> article_field_names()
{
    static const std::vector<std::string> names = names_of(article_getters());
    return names;
}

std::span<const std::string> author_field_names()
{
    static const std::vector<std::string> names = {"id", "display_name", "country", "institutions",
                                                   "root_count", "base_count", "works_count", "citation_count"};
    return names;
}

std::span<const std::string> institution_field_names()
{
    static const std::vector<std::string> names = {"id", "display_name", "country", "root_count", "base_count"};
    return names;
}

std::span<const std::string> venue_field_names()
{
    static const std::vector<std::string> names = {"id", "display_name", "root_count", "base_count"};
    return names;
}

std::string article_field(const Work& work, std::string_view field)
{
    for (const auto& [name, getter] : article_getters()) {
        if (name == field) {
            return getter(work);
        }
    }
    throw FieldError(fmt::format("unknown article field '{}'; valid fields: {}", field,
                                 join_list(article_field_names(), ", ")));
}

std::size_t export_articles_csv(const Corpus& corpus, std::span<const std::string> fields,
                                bool include_periphery, const std::filesystem::path& out_path)
{
    require_fields(fields, article_field_names(), "article");
    CsvWriter csv;
    csv.row(fields);
    std::size_t rows = 0;
    for (const auto& [id, w] : corpus.works) {
        if (!w.is_root && !include_periphery) {
            continue;
        }
        std::vector<std::string> cells;
        for (const auto& f : fields) {
            cells.push_back(article_field(w, f));
        }
        csv.row(cells);
        ++rows;
    }
    csv.save(out_path);
    return rows;
}

std::size_t export_authors_csv(const Corpus& corpus, std::span<const std::string> fields,
                               const std::filesystem::path& out_path)
{
    require_fields(fields, author_field_names(), "author");
    CsvWriter csv;
    csv.row(fields);
    const auto authors = collect_authors(corpus);
    for (const auto& a : authors) {
        std::vector<std::string> cells;
        for (const auto& f : fields) {
            if (f == "id") cells.push_back(a.id);
            else if (f == "display_name") cells.push_back(a.display_name);
            else if (f == "country") cells.push_back(a.country);
            else if (f == "institutions") cells.push_back(join_list(a.institutions));
            else if (f == "root_count") cells.push_back(std::to_string(a.root_count));
            else if (f == "base_count") cells.push_back(std::to_string(a.base_count));
            else if (f == "works_count") cells.push_back(std::to_string(a.root_count + a.base_count));
            else cells.push_back(std::to_string(a.citation_count));
        }
        csv.row(cells);
    }
    csv.save(out_path);
    return authors.size();
}

std::size_t export_institutions_csv(const Corpus& corpus, std::span<const std::string> fields,
                                    const std::filesystem::path& out_path)
{
    require_fields(fields, institution_field_names(), "institution");
    const auto cols = with_counts(fields);
    CsvWriter csv;
    csv.row(cols);
    const auto insts = collect_institutions(corpus);
    for (const auto& s : insts) {
        std::vector<std::string> cells;
        for (const auto& f : cols) {
            if (f == "id") cells.push_back(s.id);
            else if (f == "display_name") cells.push_back(s.display_name);
            else if (f == "country") cells.push_back(s.country);
            else if (f == "root_count") cells.push_back(std::to_string(s.root_count));
            else cells.push_back(std::to_string(s.base_count));
        }
        csv.row(cells);
    }
    csv.save(out_path);
    return insts.size();
}

std::size_t export_venues_csv(const Corpus& corpus, std::span<const std::string> fields,
                              const std::filesystem::path& out_path)
{
    require_fields(fields, venue_field_names(), "venue");
    const auto cols = with_counts(fields);
    CsvWriter csv;
    csv.row(cols);
    const auto venues = collect_venues(corpus);
    for (const auto& v : venues) {
        std::vector<std::string> cells;
        for (const auto& f : cols) {
            if (f == "id") cells.push_back(v.id);
            else if (f == "display_name") cells.push_back(v.display_name);
            else if (f == "root_count") cells.push_back(std::to_string(v.root_count));
            else cells.push_back(std::to_string(v.base_count));
        }
        csv.row(cells);
    }
    csv.save(out_path);
    return venues.size();
}

// ---------------------------------------------------------------------------
// Scopus-like export

namespace {

std::string scopus_document_type(const std::string& type)
{
    static const std::unordered_map<std::string, std::string> kMap = {
        {"article", "Article"}, {"journal-article", "Article"}, {"review", "Review"},
        {"book-chapter", "Book chapter"}, {"book", "Book"}, {"editorial", "Editorial"},
        {"letter", "Letter"}, {"erratum", "Erratum"}, {"proceedings-article", "Conference paper"},
        {"preprint", "Preprint"}, {"dissertation", "Thesis"}, {"dataset", "Data paper"},
    };
    if (auto it = kMap.find(type); it != kMap.end()) {
        return it->second;
    }
    if (type.empty()) {
        return type;
    }
    std::string out = type;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    std::replace(out.begin(), out.end(), '-', ' ');
    return out;
}

std::string scopus_language(const std::optional<std::string>& tag)
{
    static const std::unordered_map<std::string, std::string> kMap = {
        {"en", "English"}, {"es", "Spanish"}, {"fr", "French"}, {"de", "German"}, {"it", "Italian"},
        {"pt", "Portuguese"}, {"zh", "Chinese"}, {"ja", "Japanese"}, {"ru", "Russian"}, {"ko", "Korean"},
        {"nl", "Dutch"}, {"pl", "Polish"}, {"tr", "Turkish"}, {"ar", "Arabic"}, {"sv", "Swedish"},
    };
    if (!tag) {
        return {};
    }
    auto it = kMap.find(*tag);
    return it == kMap.end() ? *tag : it->second;
}

std::string bare_doi(const std::optional<std::string>& doi)
{
    if (!doi) {
        return {};
    }
    static constexpr std::string_view kPrefixes[] = {"https://doi.org/", "http://doi.org/", "doi:"};
    for (auto prefix : kPrefixes) {
        if (doi->rfind(prefix, 0) == 0) {
            return doi->substr(prefix.size());
        }
    }
    return *doi;
}

std::vector<std::string> scopus_row(const Work& w)
{
    std::vector<std::string> names, full, ids, with_aff;
    for (const auto& a : w.authorships) {
        names.push_back(a.display_name);
        full.push_back(fmt::format("{} ({})", a.display_name, a.author_id));
        ids.push_back(a.author_id);
        std::string entry = a.display_name;
        for (const auto& i : a.institutions) {
            entry += ", " + i.display_name;
        }
        with_aff.push_back(std::move(entry));
    }
    std::vector<std::string> topics;
    for (const auto& t : w.topics) {
        topics.push_back(t.topic);
    }
    return {
        join_list(names),
        join_list(full),
        join_list(ids),
        w.title,
        year_of(w),
        w.venue ? w.venue->display_name : std::string{},
        w.biblio.volume.value_or(""),
        w.biblio.issue.value_or(""),
        "",
        w.biblio.first_page.value_or(""),
        w.biblio.last_page.value_or(""),
        "",
        std::to_string(w.citation_count),
        bare_doi(w.doi),
        "https://openalex.org/" + w.id,
        institutions_of(w),
        join_list(with_aff),
        w.abstract.value_or(""),
        join_list(w.keywords),
        join_list(topics),
        scopus_document_type(w.type),
        scopus_language(w.language),
        "Final",
        "",
        "OpenAlex",
        w.id,
    };
}

} // namespace

std::span<const std::string> scopus_columns()
{
    static const std::vector<std::string> cols = {
        "Authors", "Author full names", "Author(s) ID", "Title", "Year", "Source title", "Volume", "Issue",
        "Art. No.", "Page start", "Page end", "Page count", "Cited by", "DOI", "Link", "Affiliations",
        "Authors with affiliations", "Abstract", "Author Keywords", "Index Keywords", "Document Type",
        "Language of Original Document", "Publication Stage", "Open Access", "Source", "EID",
    };
    return cols;
}

std::size_t export_articles_to_scopus(const Corpus& corpus, bool include_periphery,
                                      const std::filesystem::path& out_path)
{
    CsvWriter csv;
    csv.row(scopus_columns());
    std::size_t rows = 0;
    for (const auto& [id, w] : corpus.works) {
        if (!w.is_root && !include_periphery) {
            continue;
        }
        csv.row(scopus_row(w));
        ++rows;
    }
    csv.save(out_path);
    return rows;
}

} // namespace citenet
