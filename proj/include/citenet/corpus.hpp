#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citenet/query_spec.hpp"
#include "json.hpp"

namespace citenet {

struct Venue {
    std::string id;
    std::string display_name;
};

struct InstitutionRef {
    std::string id;
    std::string display_name;
    std::optional<std::string> country;
};

struct Authorship {
    std::string author_id;
    std::string display_name;
    std::optional<std::string> country;
    std::vector<InstitutionRef> institutions;
};

/// One node of the domain > field > subfield > topic hierarchy.
struct TopicAssignment {
    std::string topic;
    std::string subfield;
    std::string field;
    std::string domain;
};

enum class TopicLevel { topic, subfield, field, domain };

TopicLevel topic_level_from_string(std::string_view text);
std::string_view to_string(TopicLevel level);
const std::string& topic_at(const TopicAssignment& t, TopicLevel level);

struct Biblio {
    std::optional<std::string> volume;
    std::optional<std::string> issue;
    std::optional<std::string> first_page;
    std::optional<std::string> last_page;
};

struct Work {
    std::string id;
    std::optional<std::string> doi;
    std::string title;
    std::string publication_date;
    std::optional<std::string> language;
    std::string type;
    std::optional<Venue> venue;
    std::vector<Authorship> authorships;
    std::vector<TopicAssignment> topics;
    std::vector<std::string> keywords;
    Biblio biblio;
    /// Works citing this one.
    std::vector<std::string> cited_by;
    /// Works this one cites.
    std::vector<std::string> cite;
    std::optional<std::string> abstract;
    std::int64_t citation_count = 0;
    bool is_root = false;

    /// First topic assignment, which upstream orders by score.
    const TopicAssignment* primary_topic() const
    {
        return topics.empty() ? nullptr : &topics.front();
    }
};

struct FetchLogEntry {
    std::string work_id;
    std::string api_type;
    std::string message;
};

struct Corpus {
    /// Keyed by work id; iteration order is the id order.
    std::map<std::string, Work> works;
    std::vector<QuerySpec> query_provenance;
    std::string fetched_at;
    std::vector<FetchLogEntry> fetch_log;
    /// Ids referenced from cite/cited_by that resolve neither to a record nor
    /// to a fetch-log entry. Filled by load_corpus.
    std::vector<std::string> dangling;

    std::size_t root_count() const;
    std::size_t base_count() const;
    const Work* find(const std::string& id) const;
};

void to_json(nlohmann::json& j, const Work& w);
void from_json(const nlohmann::json& j, Work& w);

/// Serialises to the on-disk layout: an object keyed by work id plus a
/// reserved "_meta" key carrying provenance, fetch time and the fetch log.
std::string dump_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Parses and validates a corpus file. Throws DecodeError on malformed JSON
/// and LoadError (naming the work id) on duplicate ids, duplicate citation
/// links, empty author ids, partial topic hierarchies, or bad dates.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view text);

extern const std::string kMetaKey;

// ---------------------------------------------------------------------------
// Derived entities

struct VenueStats {
    std::string id;
    std::string display_name;
    std::size_t root_count = 0;
    std::size_t base_count = 0;
};

struct InstitutionStats {
    std::string id;
    std::string display_name;
    std::string country;
    std::size_t root_count = 0;
    std::size_t base_count = 0;
};

struct AuthorStats {
    std::string id;
    std::string display_name;
    std::string country;
    std::vector<std::string> institutions;
    std::size_t root_count = 0;
    std::size_t base_count = 0;
    std::int64_t citation_count = 0;
};

/// Counters hold the number of distinct works referencing the entity in the
/// root and base sets. Results are ordered by id.
std::vector<VenueStats> collect_venues(const Corpus& corpus);
std::vector<InstitutionStats> collect_institutions(const Corpus& corpus);
std::vector<AuthorStats> collect_authors(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Tabular exporters. Each returns the number of data rows written.

std::span<const std::string> article_field_names();
std::span<const std::string> author_field_names();
std::span<const std::string> institution_field_names();
std::span<const std::string> venue_field_names();
std::span<const std::string> scopus_columns();

/// Value of a named Work field as a CSV cell; list values joined by "; ".
/// Throws FieldError for unknown names.
std::string article_field(const Work& work, std::string_view field);

std::size_t export_articles_csv(const Corpus& corpus, std::span<const std::string> fields,
                                bool include_periphery, const std::filesystem::path& out_path);
std::size_t export_authors_csv(const Corpus& corpus, std::span<const std::string> fields,
                               const std::filesystem::path& out_path);
/// root_count and base_count columns are appended when not requested.
std::size_t export_institutions_csv(const Corpus& corpus, std::span<const std::string> fields,
                                    const std::filesystem::path& out_path);
std::size_t export_venues_csv(const Corpus& corpus, std::span<const std::string> fields,
                              const std::filesystem::path& out_path);
std::size_t export_articles_to_scopus(const Corpus& corpus, bool include_periphery,
                                      const std::filesystem::path& out_path);

} // namespace citenet
