#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace citenet {

/// A query pattern built from parenthesised alternative groups, e.g.
/// "(15)( )(minute|min)( )(city)". Literals outside groups are allowed;
/// nesting is not.
struct QueryPattern {
    std::string raw;
    std::vector<std::string> alternatives;
};

/// Expands every combination of the pattern's groups, left to right, first
/// alternative first. Duplicates are dropped, keeping the first occurrence.
/// Throws MalformedPatternError on unbalanced parentheses, nested groups, a
/// `|` outside a group, or an empty alternative.
std::vector<std::string> expand_lite_regex(std::string_view pattern);

QueryPattern parse_query_pattern(std::string_view pattern);

} // namespace citenet
