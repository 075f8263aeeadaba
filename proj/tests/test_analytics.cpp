#include <map>

#include "citenet/analytics.hpp"
#include "citenet/csv.hpp"
#include "citenet/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace citenet;
using testsupport::fixture_corpus;
using Strings = std::vector<std::string>;

namespace {

Work dated(const std::string& id, const std::string& date, bool root, std::optional<std::string> abstract = {})
{
    Work w;
    w.id = id;
    w.title = id;
    w.publication_date = date;
    w.type = "article";
    w.is_root = root;
    w.abstract = std::move(abstract);
    return w;
}

Corpus corpus_of(std::vector<Work> works)
{
    Corpus c;
    for (auto& w : works) c.works.emplace(w.id, std::move(w));
    return c;
}

/// The three-abstract keyword fixture.
Corpus three_abstracts()
{
    return corpus_of({dated("K1", "2020-01-15", true, "The smart city uses smart sensors."),
                      dated("K2", "2020-05-02", true, "Smart cities and the smart city of tomorrow."),
                      dated("K3", "2021-03-03", false, "Sensors in the 15 minute city.")});
}

std::map<std::string, std::int64_t> as_map(const std::vector<KeywordScore>& scores)
{
    std::map<std::string, std::int64_t> m;
    for (const auto& s : scores) m[s.ngram] = s.count;
    return m;
}

Strings labels(const TimeSeries& ts)
{
    Strings out;
    for (const auto& p : ts.points) out.push_back(p.first);
    return out;
}

} // namespace

TEST_SUITE("analytics")
{
    TEST_CASE("period labels")
    {
        const Date d{2021, 11, 3};
        CHECK(period_label(d, Interval::month) == "2021-11");
        CHECK(period_label(d, Interval::quarter) == "2021-Q4");
        CHECK(period_label(d, Interval::year) == "2021");
        CHECK(period_label(Date{2020, 3, 31}, Interval::quarter) == "2020-Q1");
        CHECK(interval_from_string("quarter") == Interval::quarter);
        CHECK_THROWS_AS(interval_from_string("week"), ParameterError);
    }

    TEST_CASE("article counts: hand example")
    {
        const Corpus c = corpus_of({dated("a", "2020-01-05", true), dated("b", "2020-02-05", true),
                                    dated("c", "2020-03-31", true), dated("d", "2020-04-01", false)});
        const TimeSeries ts = aggregate_article_counts(c, Interval::quarter);
        REQUIRE(ts.points.size() == 2);
        CHECK(ts.points[0].first == "2020-Q1");
        CHECK(ts.value(0, "root") == 3);
        CHECK(ts.value(0, "base") == 0);
        CHECK(ts.points[1].first == "2020-Q2");
        CHECK(ts.value(1, "root") == 0);
        CHECK(ts.value(1, "base") == 1);
        CHECK(ts.series == Strings{"root", "base"});
    }

    TEST_CASE("article counts: conservation on the fixture")
    {
        for (Interval iv : {Interval::month, Interval::quarter, Interval::year}) {
            const TimeSeries ts = aggregate_article_counts(fixture_corpus(), iv);
            CHECK(ts.total("root") == 5);
            CHECK(ts.total("base") == 10);
            for (std::size_t i = 1; i < ts.points.size(); ++i) CHECK(ts.points[i - 1].first < ts.points[i].first);
        }
        const TimeSeries years = aggregate_article_counts(fixture_corpus(), Interval::year);
        // B8 (2010) is the oldest work and R5 (2023) the newest; gaps are explicit zeros.
        CHECK(years.points.size() == 14);
        CHECK(years.points.front().first == "2010");
        CHECK(years.points.back().first == "2023");
        const Strings y = labels(years);
        const auto at = [&](const std::string& label) {
            return static_cast<std::size_t>(std::find(y.begin(), y.end(), label) - y.begin());
        };
        CHECK(years.value(at("2011"), "base") == 0);
        CHECK(years.value(at("2021"), "root") == 2);
        CHECK(years.value(at("2022"), "root") == 2);
        CHECK(years.value(at("2019"), "base") == 2);
        CHECK(years.value(at("2020"), "base") == 2);
    }

    TEST_CASE("article counts: empty corpus and exclusive date range")
    {
        CHECK(aggregate_article_counts(Corpus{}, Interval::year).empty());
        const TimeSeries none =
            aggregate_article_counts(fixture_corpus(), Interval::quarter, Date{1990, 1, 1}, Date{1990, 12, 31});
        CHECK(labels(none) == Strings{"1990-Q1", "1990-Q2", "1990-Q3", "1990-Q4"});
        CHECK(none.total("root") == 0);
        CHECK(none.total("base") == 0);
        CHECK_THROWS_AS(aggregate_article_counts(fixture_corpus(), Interval::year, Date{2021, 1, 1}, Date{2020, 1, 1}),
                        ParameterError);
    }

    TEST_CASE("article counts: date range excludes out-of-range works")
    {
        const TimeSeries ts =
            aggregate_article_counts(fixture_corpus(), Interval::year, Date{2019, 1, 1}, Date{2021, 12, 31});
        CHECK(labels(ts) == Strings{"2019", "2020", "2021"});
        // R1 R3 | B4 B6 B9 B10
        CHECK(ts.total("root") == 2);
        CHECK(ts.total("base") == 4);
    }

    TEST_CASE("topic counts by field: hand tally of primary topics")
    {
        // Social Sciences: R1 R2 R3 B1 B3 B4 B5. Engineering: R4 B2 B7 B8.
        // Computer Science: R5 B9. Medicine: B6. No topic: B10.
        const TimeSeries ts = aggregate_topic_counts(fixture_corpus(), TopicLevel::field, Interval::year, {}, 10);
        CHECK(ts.total("Social Sciences") == 7);
        CHECK(ts.total("Engineering") == 4);
        CHECK(ts.total("Computer Science") == 2);
        CHECK(ts.total("Medicine") == 1);
        CHECK(ts.total("unknown") == 1);
        std::int64_t all = 0;
        for (const auto& s : ts.series) all += ts.total(s);
        CHECK(all == 15);
        CHECK(ts.series.front() == "Social Sciences");
    }

    TEST_CASE("topic counts: top_n buckets the rest into other")
    {
        const TimeSeries ts = aggregate_topic_counts(fixture_corpus(), TopicLevel::field, Interval::year, {}, 2);
        CHECK(ts.series == Strings{"Social Sciences", "Engineering", "other"});
        CHECK(ts.total("other") == 4);
        const TimeSeries dom = aggregate_topic_counts(fixture_corpus(), TopicLevel::domain, Interval::year, {}, 10);
        CHECK(dom.total("Social Sciences") == 7);
        CHECK(dom.total("Physical Sciences") == 6);
        CHECK(dom.total("Health Sciences") == 1);
    }

    TEST_CASE("topic counts: filters")
    {
        Filters periphery_only;
        periphery_only.show_core = false;
        const TimeSeries ts =
            aggregate_topic_counts(fixture_corpus(), TopicLevel::field, Interval::year, periphery_only, 10);
        CHECK(ts.total("Social Sciences") == 4);
        CHECK(ts.total("Engineering") == 3);
        std::int64_t all = 0;
        for (const auto& s : ts.series) all += ts.total(s);
        CHECK(all == 10);

        Filters core_only;
        core_only.show_periphery = false;
        const TimeSeries core = aggregate_topic_counts(fixture_corpus(), TopicLevel::field, Interval::year, core_only, 10);
        const TimeSeries both = aggregate_topic_counts(fixture_corpus(), TopicLevel::field, Interval::year, {}, 10);
        for (const auto& s : core.series) CHECK(both.total(s) >= core.total(s));

        CHECK_THROWS_AS(aggregate_topic_counts(fixture_corpus(), TopicLevel::topic, Interval::year, {}, 5),
                        ParameterError);
        CHECK_THROWS_AS(aggregate_topic_counts(fixture_corpus(), TopicLevel::subfield, Interval::year, {}, 5),
                        ParameterError);
    }

    TEST_CASE("single field gives a single series")
    {
        Work w = dated("a", "2020-01-01", true);
        w.topics.push_back({"Traffic", "Transportation", "Engineering", "Physical Sciences"});
        Work v = dated("b", "2021-01-01", true);
        v.topics = w.topics;
        const TimeSeries ts = aggregate_topic_counts(corpus_of({w, v}), TopicLevel::field, Interval::year, {}, 5);
        CHECK(ts.series == Strings{"Engineering"});
    }

    TEST_CASE("top authors by work count")
    {
        // A1: R1 R2 R5 B4. A2: R1 R2 B2. A4: R3 R4 B6. Then two works each.
        const auto r = rank_top_authors(fixture_corpus(), false, 5, {});
        REQUIRE(r.size() == 5);
        CHECK(r[0].id == "A1");
        CHECK(r[0].score == 4);
        CHECK(r[1].id == "A2");
        CHECK(r[2].id == "A4");
        CHECK(r[3].id == "A3");
        CHECK(r[4].id == "A5");
        CHECK(r[0].breakdown == std::map<std::string, std::int64_t>{{"Social Sciences", 3}, {"Computer Science", 1}});
        CHECK(rank_top_authors(fixture_corpus(), false, 100, {}).size() == 12);
        CHECK_THROWS_AS(rank_top_authors(fixture_corpus(), false, 0, {}), ParameterError);
    }

    TEST_CASE("top authors by summed citations")
    {
        // A7: B1 300 + B2 210. A2: R1 120 + R2 45 + B2 210. A1: 120 + 45 + 5 + 40.
        const auto r = rank_top_authors(fixture_corpus(), true, 4, {});
        REQUIRE(r.size() == 4);
        CHECK(r[0].id == "A7");
        CHECK(r[0].score == 510);
        CHECK(r[1].id == "A2");
        CHECK(r[1].score == 375);
        CHECK(r[2].id == "A1");
        CHECK(r[2].score == 210);
        CHECK(r[3].id == "A5");
        CHECK(r[3].score == 162);
    }

    TEST_CASE("tokenizer and stopwords")
    {
        REQUIRE(is_stopword("the"));
        REQUIRE(is_stopword("and"));
        REQUIRE(is_stopword("of"));
        REQUIRE(is_stopword("in"));
        REQUIRE_FALSE(is_stopword("uses"));
        REQUIRE_FALSE(is_stopword("tomorrow"));
        REQUIRE_FALSE(is_stopword("minute"));
        CHECK(keyword_tokens("The Smart-City, and São Paulo's 15 minute city!") ==
              Strings{"smart", "city", "são", "paulo", "s", "15", "minute", "city"});
    }

    TEST_CASE("keyword extraction on the 3-abstract fixture matches hand counts")
    {
        // Filtered token streams:
        //   K1: smart city uses smart sensors
        //   K2: smart cities smart city tomorrow
        //   K3: sensors 15 minute city
        const Corpus c = three_abstracts();
        const auto uni = as_map(extract_keywords(c, {}, 100, {1, 1}));
        CHECK(uni == std::map<std::string, std::int64_t>{{"smart", 4}, {"city", 3},     {"sensors", 2},
                                                        {"uses", 1},  {"cities", 1},   {"tomorrow", 1},
                                                        {"15", 1},    {"minute", 1}});
        const auto bi = as_map(extract_keywords(c, {}, 100, {2, 2}));
        CHECK(bi == std::map<std::string, std::int64_t>{{"smart city", 2},  {"city uses", 1},   {"uses smart", 1},
                                                       {"smart sensors", 1}, {"smart cities", 1}, {"cities smart", 1},
                                                       {"city tomorrow", 1}, {"sensors 15", 1},   {"15 minute", 1},
                                                       {"minute city", 1}});
        const auto top = extract_keywords(c, {}, 4, {1, 2});
        REQUIRE(top.size() == 4);
        CHECK(top[0].ngram == "smart");
        CHECK(top[1].ngram == "city");
        CHECK(top[2].ngram == "sensors");
        CHECK(top[3].ngram == "smart city");
        const auto tri = as_map(extract_keywords(c, {}, 100, {3, 3}));
        CHECK(tri.at("15 minute city") == 1);
        CHECK(tri.size() == 3 + 3 + 2);
    }

    TEST_CASE("keyword spec examples and tie rule")
    {
        const Corpus c = corpus_of({dated("a", "2020-01-01", true, "15 minute city"),
                                    dated("b", "2020-01-02", true, "15 minute city")});
        const auto bi = extract_keywords(c, {}, 10, {2, 2});
        REQUIRE(bi.size() == 2);
        CHECK(bi[0].ngram == "15 minute");
        CHECK(bi[0].count == 2);
        CHECK(bi[1].ngram == "minute city");
        CHECK(bi[1].count == 2);
        const auto one = extract_keywords(c, {}, 1, {1, 1});
        REQUIRE(one.size() == 1);
        CHECK(one[0].ngram == "15");
        CHECK(extract_keywords(corpus_of({dated("a", "2020-01-01", true)}), {}, 10, {1, 2}).empty());
        CHECK_THROWS_AS(extract_keywords(c, {}, 10, {0, 1}), ParameterError);
        CHECK_THROWS_AS(extract_keywords(c, {}, 10, {2, 1}), ParameterError);
        CHECK_THROWS_AS(extract_keywords(c, {}, 10, {1, 4}), ParameterError);
    }

    TEST_CASE("keyword filters and determinism")
    {
        Filters core_only;
        core_only.show_periphery = false;
        const auto uni = as_map(extract_keywords(three_abstracts(), core_only, 100, {1, 1}));
        CHECK(uni.at("sensors") == 1);
        CHECK(uni.count("minute") == 0);
        const auto a = extract_keywords(fixture_corpus(), {}, 20, {1, 2});
        const auto b = extract_keywords(fixture_corpus(), {}, 20, {1, 2});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].ngram == b[i].ngram);
            CHECK(a[i].count == b[i].count);
        }
    }

    TEST_CASE("keyword trends count per period with explicit zeros")
    {
        const TimeSeries ts = keyword_trend_series(three_abstracts(), {}, 2, {1, 1}, Interval::quarter);
        CHECK(ts.series == Strings{"smart", "city"});
        CHECK(labels(ts) == Strings{"2020-Q1", "2020-Q2", "2020-Q3", "2020-Q4", "2021-Q1"});
        CHECK(ts.value(0, "smart") == 2);
        CHECK(ts.value(1, "smart") == 2);
        CHECK(ts.value(2, "smart") == 0);
        CHECK(ts.value(4, "smart") == 0);
        CHECK(ts.value(4, "city") == 1);
        // Totals agree with the corpus-wide counts.
        const auto kw = as_map(extract_keywords(three_abstracts(), {}, 2, {1, 1}));
        for (const auto& s : ts.series) CHECK(ts.total(s) == kw.at(s));
        CHECK(keyword_trend_series(corpus_of({dated("a", "2020-01-01", true)}), {}, 5, {1, 1}, Interval::year)
                  .empty());
    }

    TEST_CASE("series CSV export")
    {
        testsupport::TempDir dir("series");
        const TimeSeries ts = aggregate_article_counts(fixture_corpus(), Interval::year);
        export_series_csv(ts, dir / "s.csv");
        const CsvTable t = read_csv(dir / "s.csv");
        CHECK(t[0] == Strings{"period", "root", "base"});
        CHECK(t.size() == ts.points.size() + 1);
        std::int64_t root = 0;
        for (std::size_t i = 1; i < t.size(); ++i) root += std::stoll(t[i][1]);
        CHECK(root == 5);
    }
}
