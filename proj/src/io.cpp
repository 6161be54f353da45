#include "fsd/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "fsd/error.hpp"

namespace fsd {

namespace fs = std::filesystem;

void require_exists(const fs::path& path, std::string_view what) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw MissingResourceError(std::string(what) + " not found: " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  require_exists(path, "file");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingResourceError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MissingResourceError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw MissingResourceError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace fsd
