#include "citenet/query_spec.hpp"

#include <fmt/format.h>

#include "citenet/date.hpp"
#include "citenet/error.hpp"
#include "citenet/hash.hpp"

namespace citenet {

std::string_view to_string(ApiType type)
{
    switch (type) {
    case ApiType::search: return "search";
    case ApiType::cite: return "cite";
    case ApiType::cited_by: return "cited_by";
    }
    return "search";
}

ApiType api_type_from_string(std::string_view text)
{
    if (text == "search") return ApiType::search;
    if (text == "cite") return ApiType::cite;
    if (text == "cited_by") return ApiType::cited_by;
    throw InvalidQueryError(fmt::format("unknown api type '{}' (expected search, cite, cited_by)", text));
}

void QuerySpec::validate() const
{
    if (api_type != ApiType::search && (!parameter || parameter->empty())) {
        throw InvalidQueryError(fmt::format("api type '{}' requires a work id parameter", to_string(api_type)));
    }
    if (api_type == ApiType::search && (!parameter || parameter->empty())) {
        throw InvalidQueryError("search requires a query text");
    }
    std::optional<Date> from, to;
    if (from_publication_date) {
        from = parse_date(*from_publication_date);
        if (!from) {
            throw InvalidQueryError(fmt::format("invalid from_publication_date '{}'", *from_publication_date));
        }
    }
    if (to_publication_date) {
        to = parse_date(*to_publication_date);
        if (!to) {
            throw InvalidQueryError(fmt::format("invalid to_publication_date '{}'", *to_publication_date));
        }
    }
    if (from && to && *to < *from) {
        throw InvalidQueryError("from_publication_date is after to_publication_date");
    }
}

std::string QuerySpec::canonical() const
{
    nlohmann::json j = nlohmann::json::object();
    j["api_type"] = to_string(api_type);
    j["parameter"] = parameter ? nlohmann::json(*parameter) : nlohmann::json(nullptr);
    j["from_publication_date"] = from_publication_date ? nlohmann::json(*from_publication_date) : nlohmann::json(nullptr);
    j["to_publication_date"] = to_publication_date ? nlohmann::json(*to_publication_date) : nlohmann::json(nullptr);
    return j.dump();
}

std::string QuerySpec::cache_key() const
{
    return sha224_hex(canonical());
}

void to_json(nlohmann::json& j, const QuerySpec& spec)
{
    j = nlohmann::json::object();
    j["api_type"] = to_string(spec.api_type);
    j["parameter"] = spec.parameter ? nlohmann::json(*spec.parameter) : nlohmann::json(nullptr);
    j["from_publication_date"] = spec.from_publication_date ? nlohmann::json(*spec.from_publication_date) : nlohmann::json(nullptr);
    j["to_publication_date"] = spec.to_publication_date ? nlohmann::json(*spec.to_publication_date) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, QuerySpec& spec)
{
    auto opt = [&](const char* key) -> std::optional<std::string> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) {
            return std::nullopt;
        }
        return it->get<std::string>();
    };
    spec.api_type = api_type_from_string(j.at("api_type").get<std::string>());
    spec.parameter = opt("parameter");
    spec.from_publication_date = opt("from_publication_date");
    spec.to_publication_date = opt("to_publication_date");
    spec.mail = opt("mail").value_or("");
}

} // namespace citenet
