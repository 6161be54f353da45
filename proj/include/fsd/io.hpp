#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fsd {

/// Whole-file read. Missing files raise MissingResourceError.
std::string read_file(const std::filesystem::path& path);

/// Writes to `<path>.tmp` and renames over `path`, so readers never observe a
/// partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

void require_exists(const std::filesystem::path& path, std::string_view what);

}  // namespace fsd
