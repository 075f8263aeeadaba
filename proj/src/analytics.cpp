#include "citenet/analytics.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "citenet/csv.hpp"
#include "citenet/error.hpp"

namespace citenet {

namespace {

const std::unordered_set<std::string_view> kStopwords = {
    "a",       "about",   "above",   "after",   "again",   "against", "all",      "also",    "am",      "among",
    "an",      "and",     "any",     "are",     "as",      "at",      "be",       "because", "been",    "before",
    "being",   "below",   "between", "both",    "but",     "by",      "can",      "could",   "did",     "do",
    "does",    "doing",   "down",    "during",  "each",    "either",  "et",       "etc",     "few",     "for",
    "from",    "further", "had",     "has",     "have",    "having",  "he",       "her",     "here",    "hers",
    "herself", "him",     "himself", "his",     "how",     "however", "i",        "if",      "in",      "into",
    "is",      "it",      "its",     "itself",  "just",    "may",     "me",       "might",   "more",    "most",
    "must",    "my",      "myself",  "no",      "nor",     "not",     "now",      "of",      "off",     "on",
    "once",    "only",    "or",      "other",   "our",     "ours",    "ourselves", "out",    "over",    "own",
    "per",     "same",    "she",     "should",  "so",      "some",    "such",     "than",    "that",    "the",
    "their",   "theirs",  "them",    "themselves", "then", "there",   "these",    "they",    "this",    "those",
    "through", "thus",    "to",      "too",     "under",   "until",   "up",       "upon",    "us",      "very",
    "via",     "was",     "we",      "were",    "what",    "when",    "where",    "whether", "which",   "while",
    "who",     "whom",    "whose",   "why",     "will",    "with",    "within",   "without", "would",   "yet",
    "you",     "your",    "yours",   "yourself", "yourselves"};

struct Period {
    int year = 0;
    int index = 1;

    auto operator<=>(const Period&) const = default;
};

Period period_of(const Date& d, Interval interval)
{
    switch (interval) {
    case Interval::month: return {d.year, d.month};
    case Interval::quarter: return {d.year, (d.month - 1) / 3 + 1};
    case Interval::year: return {d.year, 1};
    }
    return {d.year, 1};
}

Period next_period(Period p, Interval interval)
{
    const int per_year = interval == Interval::month ? 12 : interval == Interval::quarter ? 4 : 1;
    if (++p.index > per_year) {
        p.index = 1;
        ++p.year;
    }
    return p;
}

std::string label_of(Period p, Interval interval)
{
    switch (interval) {
    case Interval::month: return fmt::format("{:04d}-{:02d}", p.year, p.index);
    case Interval::quarter: return fmt::format("{:04d}-Q{}", p.year, p.index);
    case Interval::year: return fmt::format("{:04d}", p.year);
    }
    return {};
}

void check_range(const std::optional<Date>& from, const std::optional<Date>& to)
{
    if (from && to && *to < *from) {
        throw ParameterError(fmt::format("date_from {} is after date_to {}", from->iso(), to->iso()));
    }
}

bool in_range(const Date& d, const std::optional<Date>& from, const std::optional<Date>& to)
{
    return (!from || !(d < *from)) && (!to || !(*to < d));
}

/// A work passing the filters, with its parsed publication date.
struct DatedWork {
    const Work* work;
    Date date;
};

std::vector<DatedWork> select_works(const Corpus& corpus, const Filters& filters)
{
    check_range(filters.date_from, filters.date_to);
    std::vector<DatedWork> out;
    for (const auto& [id, w] : corpus.works) {
        if (w.is_root ? !filters.show_core : !filters.show_periphery) {
            continue;
        }
        auto d = parse_date(w.publication_date);
        if (!d || !in_range(*d, filters.date_from, filters.date_to)) {
            continue;
        }
        out.push_back({&w, *d});
    }
    return out;
}

/// Empty-period-filled skeleton between the earliest and latest selected work,
/// or across the full date filter when both bounds are set.
TimeSeries skeleton(const std::vector<DatedWork>& works, Interval interval, const std::optional<Date>& from,
                    const std::optional<Date>& to, const std::vector<std::string>& names)
{
    TimeSeries ts;
    ts.interval = interval;
    ts.series = names;
    std::optional<Period> lo, hi;
    if (from && to) {
        lo = period_of(*from, interval);
        hi = period_of(*to, interval);
    } else {
        for (const auto& dw : works) {
            const Period p = period_of(dw.date, interval);
            if (!lo || p < *lo) {
                lo = p;
            }
            if (!hi || *hi < p) {
                hi = p;
            }
        }
    }
    if (!lo) {
        return ts;
    }
    std::map<std::string, std::int64_t> zero;
    for (const auto& n : names) {
        zero[n] = 0;
    }
    for (Period p = *lo; !(*hi < p); p = next_period(p, interval)) {
        ts.points.emplace_back(label_of(p, interval), zero);
    }
    return ts;
}

std::size_t point_index(const TimeSeries& ts, const std::string& label)
{
    auto it = std::lower_bound(ts.points.begin(), ts.points.end(), label,
                               [](const auto& point, const std::string& l) { return point.first < l; });
    return static_cast<std::size_t>(it - ts.points.begin());
}

std::string topic_value(const Work& w, TopicLevel level)
{
    const TopicAssignment* t = w.primary_topic();
    return t ? topic_at(*t, level) : std::string("unknown");
}

void check_level(TopicLevel level)
{
    if (level != TopicLevel::field && level != TopicLevel::domain) {
        throw ParameterError(fmt::format("topic level must be field or domain, not {}", to_string(level)));
    }
}

void check_ngram_range(std::pair<int, int> range)
{
    if (range.first < 1 || range.first > range.second || range.second > 3) {
        throw ParameterError(fmt::format("ngram_range ({}, {}) must satisfy 1 <= lo <= hi <= 3", range.first,
                                         range.second));
    }
}

void add_ngrams(const std::vector<std::string>& tokens, std::pair<int, int> range,
                std::unordered_map<std::string, std::int64_t>& counts)
{
    for (int len = range.first; len <= range.second; ++len) {
        const auto l = static_cast<std::size_t>(len);
        for (std::size_t i = 0; i + l <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            for (std::size_t j = 1; j < l; ++j) {
                gram += ' ';
                gram += tokens[i + j];
            }
            ++counts[gram];
        }
    }
}

} // namespace

Interval interval_from_string(std::string_view text)
{
    if (text == "month") {
        return Interval::month;
    }
    if (text == "quarter") {
        return Interval::quarter;
    }
    if (text == "year") {
        return Interval::year;
    }
    throw ParameterError(fmt::format("invalid interval '{}' (expected month, quarter or year)", text));
}

std::string_view to_string(Interval interval)
{
    switch (interval) {
    case Interval::month: return "month";
    case Interval::quarter: return "quarter";
    case Interval::year: return "year";
    }
    return "year";
}

std::string period_label(const Date& date, Interval interval)
{
    return label_of(period_of(date, interval), interval);
}

std::int64_t TimeSeries::total(const std::string& name) const
{
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sum += value(i, name);
    }
    return sum;
}

std::int64_t TimeSeries::value(std::size_t point, const std::string& name) const
{
    const auto& m = points.at(point).second;
    auto it = m.find(name);
    return it == m.end() ? 0 : it->second;
}

TimeSeries aggregate_article_counts(const Corpus& corpus, Interval interval, std::optional<Date> date_from,
                                    std::optional<Date> date_to)
{
    Filters filters;
    filters.date_from = date_from;
    filters.date_to = date_to;
    const auto works = select_works(corpus, filters);
    TimeSeries ts = skeleton(works, interval, date_from, date_to, {"root", "base"});
    for (const auto& dw : works) {
        auto& counts = ts.points[point_index(ts, period_label(dw.date, interval))].second;
        ++counts[dw.work->is_root ? "root" : "base"];
    }
    return ts;
}

TimeSeries aggregate_topic_counts(const Corpus& corpus, TopicLevel level, Interval interval, const Filters& filters,
                                  std::size_t top_n)
{
    check_level(level);
    const auto works = select_works(corpus, filters);
    std::map<std::string, std::int64_t> totals;
    for (const auto& dw : works) {
        ++totals[topic_value(*dw.work, level)];
    }
    std::vector<std::pair<std::string, std::int64_t>> ranked(totals.begin(), totals.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    std::vector<std::string> names;
    std::set<std::string> kept;
    for (std::size_t i = 0; i < ranked.size() && i < top_n; ++i) {
        names.push_back(ranked[i].first);
        kept.insert(ranked[i].first);
    }
    const bool has_other = ranked.size() > top_n;
    if (has_other) {
        names.emplace_back("other");
    }
    TimeSeries ts = skeleton(works, interval, filters.date_from, filters.date_to, names);
    for (const auto& dw : works) {
        const std::string topic = topic_value(*dw.work, level);
        auto& counts = ts.points[point_index(ts, period_label(dw.date, interval))].second;
        ++counts[kept.count(topic) ? topic : std::string("other")];
    }
    return ts;
}

std::vector<AuthorRank> rank_top_authors(const Corpus& corpus, bool by_citations, std::size_t num_authors,
                                         const Filters& filters, TopicLevel level)
{
    if (num_authors < 1) {
        throw ParameterError("num_authors must be at least 1");
    }
    check_level(level);
    std::map<std::string, AuthorRank> authors;
    for (const auto& dw : select_works(corpus, filters)) {
        const Work& w = *dw.work;
        const std::int64_t amount = by_citations ? w.citation_count : 1;
        const std::string topic = topic_value(w, level);
        std::set<std::string> seen;
        for (const auto& a : w.authorships) {
            if (!seen.insert(a.author_id).second) {
                continue;
            }
            auto [it, inserted] = authors.try_emplace(a.author_id);
            if (inserted) {
                it->second.id = a.author_id;
                it->second.display_name = a.display_name;
            }
            it->second.score += amount;
            it->second.breakdown[topic] += amount;
        }
    }
    std::vector<AuthorRank> ranked;
    for (auto& [id, r] : authors) {
        ranked.push_back(std::move(r));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const AuthorRank& a, const AuthorRank& b) {
        return a.score > b.score;
    });
    if (ranked.size() > num_authors) {
        ranked.resize(num_authors);
    }
    return ranked;
}

bool is_stopword(std::string_view token)
{
    return kStopwords.count(token) > 0;
}

std::vector<std::string> keyword_tokens(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !is_stopword(current)) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')) {
            current += ch;
        } else if (c >= 'A' && c <= 'Z') {
            current += static_cast<char>(c - 'A' + 'a');
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<KeywordScore> extract_keywords(const Corpus& corpus, const Filters& filters, std::size_t top_n,
                                           std::pair<int, int> ngram_range)
{
    check_ngram_range(ngram_range);
    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& dw : select_works(corpus, filters)) {
        if (dw.work->abstract) {
            add_ngrams(keyword_tokens(*dw.work->abstract), ngram_range, counts);
        }
    }
    std::vector<KeywordScore> scores;
    scores.reserve(counts.size());
    for (auto& [gram, c] : counts) {
        scores.push_back({gram, c});
    }
    std::sort(scores.begin(), scores.end(), [](const KeywordScore& a, const KeywordScore& b) {
        return a.count != b.count ? a.count > b.count : a.ngram < b.ngram;
    });
    if (scores.size() > top_n) {
        scores.resize(top_n);
    }
    return scores;
}

TimeSeries keyword_trend_series(const Corpus& corpus, const Filters& filters, std::size_t top_n,
                                std::pair<int, int> ngram_range, Interval interval)
{
    const auto top = extract_keywords(corpus, filters, top_n, ngram_range);
    TimeSeries ts;
    ts.interval = interval;
    if (top.empty()) {
        return ts;
    }
    std::vector<std::string> names;
    for (const auto& k : top) {
        names.push_back(k.ngram);
    }
    std::vector<DatedWork> with_abstracts;
    for (const auto& dw : select_works(corpus, filters)) {
        if (dw.work->abstract) {
            with_abstracts.push_back(dw);
        }
    }
    ts = skeleton(with_abstracts, interval, filters.date_from, filters.date_to, names);
    for (const auto& dw : with_abstracts) {
        std::unordered_map<std::string, std::int64_t> counts;
        add_ngrams(keyword_tokens(*dw.work->abstract), ngram_range, counts);
        auto& point = ts.points[point_index(ts, period_label(dw.date, interval))].second;
        for (const auto& n : names) {
            if (auto it = counts.find(n); it != counts.end()) {
                point[n] += it->second;
            }
        }
    }
    return ts;
}

void export_series_csv(const TimeSeries& series, const std::filesystem::path& out_path)
{
    CsvWriter csv;
    std::vector<std::string> header{"period"};
    header.insert(header.end(), series.series.begin(), series.series.end());
    csv.row(header);
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        std::vector<std::string> row{series.points[i].first};
        for (const auto& name : series.series) {
            row.push_back(std::to_string(series.value(i, name)));
        }
        csv.row(row);
    }
    csv.save(out_path);
}

} // namespace citenet
