#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/date.hpp"

namespace citenet {

enum class Interval { month, quarter, year };

Interval interval_from_string(std::string_view text);
std::string_view to_string(Interval interval);

/// "YYYY-MM", "YYYY-Qn" or "YYYY"; lexicographic order is chronological.
std::string period_label(const Date& date, Interval interval);

struct TimeSeries {
    Interval interval = Interval::year;
    /// Series names in display order.
    std::vector<std::string> series;
    /// Strictly increasing period labels, each with a count per series.
    std::vector<std::pair<std::string, std::map<std::string, std::int64_t>>> points;

    bool empty() const { return points.empty(); }
    std::int64_t total(const std::string& name) const;
    std::int64_t value(std::size_t point, const std::string& name) const;
};

struct Filters {
    bool show_core = true;
    bool show_periphery = true;
    std::optional<Date> date_from;
    std::optional<Date> date_to;
};

struct KeywordScore {
    std::string ngram;
    std::int64_t count = 0;
};

struct AuthorRank {
    std::string id;
    std::string display_name;
    /// Work count, or citation sum when ranking by citations.
    std::int64_t score = 0;
    /// The same quantity split by primary topic at the requested level.
    std::map<std::string, std::int64_t> breakdown;
};

/// Series "root" and "base". Works without a parseable date are skipped.
/// When both bounds are given the periods span the whole range.
TimeSeries aggregate_article_counts(const Corpus& corpus, Interval interval,
                                    std::optional<Date> date_from = std::nullopt,
                                    std::optional<Date> date_to = std::nullopt);

/// One series per primary-topic value at `level` (field or domain). The
/// top_n values by total are kept and the rest summed into "other".
TimeSeries aggregate_topic_counts(const Corpus& corpus, TopicLevel level, Interval interval, const Filters& filters,
                                  std::size_t top_n);

std::vector<AuthorRank> rank_top_authors(const Corpus& corpus, bool by_citations, std::size_t num_authors,
                                         const Filters& filters, TopicLevel level = TopicLevel::field);

/// Lowercased alphanumeric tokens of `text` with stopwords removed.
std::vector<std::string> keyword_tokens(std::string_view text);
bool is_stopword(std::string_view token);

/// Corpus-wide n-gram occurrence counts over abstracts, sorted by count
/// (descending) then n-gram, truncated to top_n.
std::vector<KeywordScore> extract_keywords(const Corpus& corpus, const Filters& filters, std::size_t top_n,
                                           std::pair<int, int> ngram_range);

TimeSeries keyword_trend_series(const Corpus& corpus, const Filters& filters, std::size_t top_n,
                                std::pair<int, int> ngram_range, Interval interval);

/// "period" column followed by one column per series.
void export_series_csv(const TimeSeries& series, const std::filesystem::path& out_path);

} // namespace citenet
