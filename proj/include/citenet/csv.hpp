#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace citenet {

/// Comma-separated, RFC-4180 quoting, LF line ends.
class CsvWriter {
public:
    void row(std::span<const std::string> cells);
    void row(std::initializer_list<std::string> cells)
    {
        row(std::span<const std::string>(cells.begin(), cells.size()));
    }

    const std::string& str() const { return buffer_; }
    void save(const std::filesystem::path& path) const;

private:
    std::string buffer_;
};

std::string csv_escape(std::string_view cell);

using CsvTable = std::vector<std::vector<std::string>>;

/// Parses RFC-4180 text (CRLF tolerated). Throws DecodeError on an
/// unterminated quoted cell.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Joins list values for a single cell.
std::string join_list(std::span<const std::string> items, std::string_view sep = "; ");

} // namespace citenet
