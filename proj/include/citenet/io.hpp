#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace citenet {

std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`, so
/// readers never observe a partial file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace citenet
