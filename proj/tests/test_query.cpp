#include <algorithm>
#include <set>

#include "citenet/error.hpp"
#include "citenet/lite_regex.hpp"
#include "citenet/openalex_client.hpp"
#include "citenet/query_spec.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace citenet;
using Strings = std::vector<std::string>;

TEST_SUITE("query")
{
    TEST_CASE("lite regex expands the 15-minute-city pattern")
    {
        CHECK(expand_lite_regex("(15)( )(minute|min)( )(city)") == Strings{"15 minute city", "15 min city"});
    }

    TEST_CASE("lite regex single group and cartesian product")
    {
        CHECK(expand_lite_regex("(dna)") == Strings{"dna"});
        CHECK(expand_lite_regex("(a|b)(x|y)") == Strings{"ax", "ay", "bx", "by"});
        CHECK(expand_lite_regex("urban (heat|cool) island") == Strings{"urban heat island", "urban cool island"});
        CHECK(expand_lite_regex("plain text") == Strings{"plain text"});
    }

    TEST_CASE("lite regex drops duplicates keeping the first")
    {
        CHECK(expand_lite_regex("(a|a|b)(c)") == Strings{"ac", "bc"});
        CHECK(expand_lite_regex("(ab|a)(c|bc)") == Strings{"abc", "abbc", "ac"});
    }

    TEST_CASE("lite regex product size matches group sizes")
    {
        const auto out = expand_lite_regex("(a|b|c)(1|2)(x|y|z|w)");
        CHECK(out.size() == 3 * 2 * 4);
        CHECK(std::set<std::string>(out.begin(), out.end()).size() == out.size());
        CHECK(out.front() == "a1x");
        CHECK(out.back() == "c2w");
    }

    TEST_CASE("malformed patterns")
    {
        CHECK_THROWS_AS(expand_lite_regex("(15"), MalformedPatternError);
        CHECK_THROWS_AS(expand_lite_regex("15)"), MalformedPatternError);
        CHECK_THROWS_AS(expand_lite_regex("(a|)"), MalformedPatternError);
        CHECK_THROWS_AS(expand_lite_regex("(|a)"), MalformedPatternError);
        CHECK_THROWS_AS(expand_lite_regex("((a))"), MalformedPatternError);
        CHECK_THROWS_AS(expand_lite_regex("a|b"), MalformedPatternError);
        CHECK_THROWS_AS(expand_lite_regex("()"), MalformedPatternError);
    }

    TEST_CASE("query pattern keeps its source")
    {
        const auto p = parse_query_pattern("(15)( )(minute|min)( )(city)");
        CHECK(p.raw == "(15)( )(minute|min)( )(city)");
        CHECK(p.alternatives.size() == 2);
    }

    TEST_CASE("reconstruct abstract")
    {
        using Index = std::map<std::string, std::vector<long long>>;
        CHECK(reconstruct_abstract(Index{{"a", {0}}, {"b", {1}}}) == "a b");
        CHECK(reconstruct_abstract(Index{}) == "");
        CHECK(reconstruct_abstract(Index{{"city", {2}}, {"minute", {1}}, {"15", {0}}}) == "15 minute city");
        CHECK(reconstruct_abstract(Index{{"the", {0, 3}}, {"city", {1}}, {"and", {2}}, {"town", {4}}}) ==
              "the city and the town");
        CHECK(reconstruct_abstract(Index{{"gap", {0}}, {"here", {7}}}) == "gap here");
    }

    TEST_CASE("reconstruct abstract rejects conflicts and negatives")
    {
        using Index = std::map<std::string, std::vector<long long>>;
        try {
            reconstruct_abstract(Index{{"a", {0, 4}}, {"b", {4}}});
            FAIL("expected a conflict");
        } catch (const AbstractConflictError& e) {
            CHECK(std::string(e.what()).find('4') != std::string::npos);
        }
        CHECK_THROWS_AS(reconstruct_abstract(Index{{"a", {-1}}}), DecodeError);
    }

    TEST_CASE("reconstruct abstract from json")
    {
        CHECK(reconstruct_abstract(nlohmann::json::parse(R"({"world":[1],"hello":[0]})")) == "hello world");
        CHECK(reconstruct_abstract(nlohmann::json(nullptr)) == "");
    }

    TEST_CASE("query spec validation")
    {
        QuerySpec cite;
        cite.api_type = ApiType::cite;
        CHECK_THROWS_AS(cite.validate(), InvalidQueryError);
        cite.parameter = "W1";
        CHECK_NOTHROW(cite.validate());

        QuerySpec s;
        s.parameter = "dna";
        s.from_publication_date = "2020-01-01";
        s.to_publication_date = "2019-01-01";
        CHECK_THROWS_AS(s.validate(), InvalidQueryError);
        s.to_publication_date = "2020-01-01";
        CHECK_NOTHROW(s.validate());
        s.to_publication_date = "not a date";
        CHECK_THROWS_AS(s.validate(), InvalidQueryError);
    }

    TEST_CASE("cache key is a 224-bit digest independent of mail and cache flag")
    {
        QuerySpec a;
        a.parameter = "15 minute city";
        a.from_publication_date = "2019-01-01";
        a.mail = "x@example.org";
        QuerySpec b = a;
        b.mail = "someone.else@example.org";
        b.cache = false;
        CHECK(a.cache_key().size() == 56);
        CHECK(a.cache_key() == b.cache_key());
        b.to_publication_date = "2024-01-01";
        CHECK(a.cache_key() != b.cache_key());
    }

    TEST_CASE("cache key agrees with the recorded fixture file names")
    {
        // The fixture generator derives its file names with Python's hashlib
        // over json.dumps(sort_keys=True), an independent implementation.
        std::set<std::string> names;
        for (const auto& e : std::filesystem::directory_iterator(testsupport::fixture_dir())) {
            names.insert(e.path().stem().string());
        }
        QuerySpec s;
        s.parameter = "15 min city";
        s.from_publication_date = "2019-01-01";
        CHECK(names.count(s.cache_key()) == 1);
        QuerySpec c;
        c.api_type = ApiType::cited_by;
        c.parameter = "W4301000003";
        CHECK(names.count(c.cache_key()) == 1);
        CHECK(s.canonical() ==
              R"({"api_type":"search","from_publication_date":"2019-01-01","parameter":"15 min city","to_publication_date":null})");
    }

    TEST_CASE("request targets use the Table 5 filters and carry mailto")
    {
        QuerySpec s;
        s.parameter = "dna";
        s.mail = "me@example.org";
        s.from_publication_date = "2019-01-01";
        const auto t = build_request_target(s, 200, "*");
        CHECK(t.rfind("/works?filter=title_and_abstract.search%3Adna%2Cfrom_publication_date%3A2019-01-01", 0) == 0);
        CHECK(t.find("per-page=200") != std::string::npos);
        CHECK(t.find("cursor=%2A") != std::string::npos);
        CHECK(t.find("mailto=me%40example.org") != std::string::npos);

        QuerySpec c;
        c.api_type = ApiType::cite;
        c.parameter = "W1";
        c.from_publication_date = "2019-01-01";
        CHECK(build_request_target(c, 200, "*").rfind("/works?filter=cites%3AW1&", 0) == 0);
        c.api_type = ApiType::cited_by;
        CHECK(build_request_target(c, 200, "*").rfind("/works?filter=cited_by%3AW1&", 0) == 0);
    }

    TEST_CASE("mail validation")
    {
        CHECK(is_valid_mail("user@example.org"));
        CHECK_FALSE(is_valid_mail("user.example.org"));
        CHECK_FALSE(is_valid_mail("@example.org"));
        CHECK_FALSE(is_valid_mail("user@localhost"));
        CHECK_FALSE(is_valid_mail("a@b@c.org"));
    }
}
