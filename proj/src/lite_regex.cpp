#include "citenet/lite_regex.hpp"

#include <unordered_set>

#include <fmt/format.h>

#include "citenet/error.hpp"

namespace citenet {

namespace {

using Group = std::vector<std::string>;

std::vector<Group> tokenize(std::string_view pattern)
{
    std::vector<Group> groups;
    std::string literal;
    auto flush_literal = [&] {
        if (!literal.empty()) {
            groups.push_back({literal});
            literal.clear();
        }
    };

    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const char c = pattern[i];
        if (c == ')') {
            throw MalformedPatternError(fmt::format("unbalanced ')' at offset {}", i));
        }
        if (c == '|') {
            throw MalformedPatternError(fmt::format("'|' outside a group at offset {}", i));
        }
        if (c != '(') {
            literal.push_back(c);
            continue;
        }
        flush_literal();
        Group group;
        std::string current;
        bool closed = false;
        for (++i; i < pattern.size(); ++i) {
            const char g = pattern[i];
            if (g == '(') {
                throw MalformedPatternError(fmt::format("nested group at offset {}", i));
            }
            if (g == '|' || g == ')') {
                if (current.empty()) {
                    throw MalformedPatternError(fmt::format("empty alternative at offset {}", i));
                }
                group.push_back(std::move(current));
                current.clear();
                if (g == ')') {
                    closed = true;
                    break;
                }
                continue;
            }
            current.push_back(g);
        }
        if (!closed) {
            throw MalformedPatternError("unbalanced '(' : group never closed");
        }
        groups.push_back(std::move(group));
    }
    flush_literal();
    return groups;
}

} // namespace

std::vector<std::string> expand_lite_regex(std::string_view pattern)
{
    const auto groups = tokenize(pattern);

    std::vector<std::string> combos{""};
    for (const auto& group : groups) {
        std::vector<std::string> next;
        next.reserve(combos.size() * group.size());
        for (const auto& prefix : combos) {
            for (const auto& alt : group) {
                next.push_back(prefix + alt);
            }
        }
        combos = std::move(next);
    }

    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& s : combos) {
        if (seen.insert(s).second) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

QueryPattern parse_query_pattern(std::string_view pattern)
{
    return QueryPattern{std::string(pattern), expand_lite_regex(pattern)};
}

} // namespace citenet
