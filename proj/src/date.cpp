#include "citenet/date.hpp"

#include <charconv>

#include <fmt/format.h>

namespace citenet {

namespace {

bool parse_int(std::string_view s, int& out)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

int days_in_month(int year, int month)
{
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return month == 2 && leap ? 29 : kDays[month - 1];
}

} // namespace

std::string Date::iso() const
{
    return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day);
}

std::optional<Date> parse_date(std::string_view text)
{
    Date d;
    if (text.size() < 4 || !parse_int(text.substr(0, 4), d.year)) {
        return std::nullopt;
    }
    if (text.size() == 4) {
        return d;
    }
    if (text.size() < 7 || text[4] != '-' || !parse_int(text.substr(5, 2), d.month)) {
        return std::nullopt;
    }
    if (d.month < 1 || d.month > 12) {
        return std::nullopt;
    }
    if (text.size() == 7) {
        return d;
    }
    if (text.size() != 10 || text[7] != '-' || !parse_int(text.substr(8, 2), d.day)) {
        return std::nullopt;
    }
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        return std::nullopt;
    }
    return d;
}

} // namespace citenet
