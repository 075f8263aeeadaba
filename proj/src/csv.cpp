#include "citenet/csv.hpp"

#include "citenet/error.hpp"
#include "citenet/io.hpp"

namespace citenet {

std::string csv_escape(std::string_view cell)
{
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(cell);
    }
    std::string out;
    out.reserve(cell.size() + 2);
    out.push_back('"');
    for (char c : cell) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void CsvWriter::row(std::span<const std::string> cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            buffer_.push_back(',');
        }
        buffer_ += csv_escape(cells[i]);
    }
    buffer_.push_back('\n');
}

void CsvWriter::save(const std::filesystem::path& path) const
{
    write_file_atomic(path, buffer_);
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool row_open = false;

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        row_open = true;
        switch (c) {
        case '"':
            quoted = true;
            break;
        case ',':
            row.push_back(std::move(cell));
            cell.clear();
            break;
        case '\r':
            break;
        case '\n':
            row.push_back(std::move(cell));
            cell.clear();
            table.push_back(std::move(row));
            row.clear();
            row_open = false;
            break;
        default:
            cell.push_back(c);
        }
    }
    if (quoted) {
        throw DecodeError("csv: unterminated quoted cell");
    }
    if (row_open) {
        row.push_back(std::move(cell));
        table.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    return parse_csv(read_file(path));
}

std::string join_list(std::span<const std::string> items, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += items[i];
    }
    return out;
}

} // namespace citenet
