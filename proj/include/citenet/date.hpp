#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace citenet {

/// Calendar date parsed from an ISO "YYYY-MM-DD" string.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    std::string iso() const;
};

/// Parses "YYYY-MM-DD" (a bare "YYYY" or "YYYY-MM" is also accepted and
/// padded with the first month/day). Returns nullopt on anything else.
std::optional<Date> parse_date(std::string_view text);

} // namespace citenet
