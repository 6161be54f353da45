#include "fsd/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <iostream>

#include "fsd/error.hpp"
#include "fsd/io.hpp"
#include "fsd/simd/kernels.hpp"

namespace fsd {

namespace {

constexpr char kBinaryMagic[8] = {'T', 'W', 'V', 'E', 'C', '1', '\0', '\0'};
constexpr std::size_t kBinaryHeaderSize = 16;

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

bool is_field_sep(char c) { return c == ' ' || c == '\t'; }

// Splits on runs of spaces/tabs.
void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_field_sep(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_field_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

double parse_component(std::string_view text, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(at_line(line, "invalid number '" + std::string(text) + "'"));
  }
  if (!std::isfinite(value)) throw ValidationError(at_line(line, "non-finite component"));
  return value;
}

template <class Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    start = end + 1;
  }
}

std::uint32_t read_u32_le(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out += static_cast<char>((v >> (8 * k)) & 0xFF);
}

float read_f32_le(const char* p) {
  std::uint32_t bits = read_u32_le(p);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

void write_f32_le(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  write_u32_le(out, bits);
}

TweetVectorFile parse_binary(std::string_view content) {
  if (content.size() < kBinaryHeaderSize) throw ValidationError("tweet vectors: truncated header");
  const std::uint32_t count = read_u32_le(content.data() + 8);
  const std::uint32_t dim = read_u32_le(content.data() + 12);
  if (dim == 0) throw ValidationError("tweet vectors: zero dimension");
  TweetVectorFile file(dim);
  std::vector<double> values(dim);
  std::size_t pos = kBinaryHeaderSize;
  for (std::uint32_t r = 0; r < count; ++r) {
    if (pos + 4 > content.size()) throw ValidationError("tweet vectors: truncated record");
    const std::uint32_t id_len = read_u32_le(content.data() + pos);
    pos += 4;
    if (pos + id_len + 4ull * dim > content.size()) {
      throw ValidationError("tweet vectors: truncated record " + std::to_string(r));
    }
    std::string id(content.substr(pos, id_len));
    pos += id_len;
    for (std::uint32_t k = 0; k < dim; ++k) {
      values[k] = read_f32_le(content.data() + pos);
      pos += 4;
      if (!std::isfinite(values[k])) {
        throw ValidationError("tweet vectors: non-finite component in record '" + id + "'");
      }
    }
    file.insert(std::move(id), values);
  }
  if (pos != content.size()) throw ValidationError("tweet vectors: trailing bytes after records");
  return file;
}

TweetVectorFile parse_tsv(std::string_view content) {
  TweetVectorFile file;
  bool first = true;
  std::vector<double> values;
  for_each_line(content, [&](std::string_view line, std::size_t no) {
    if (line.empty()) return;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ValidationError(at_line(no, "expected id<TAB>values"));
    std::string id(line.substr(0, tab));
    values.clear();
    std::size_t start = tab + 1;
    while (start <= line.size()) {
      std::size_t end = line.find('\t', start);
      if (end == std::string_view::npos) end = line.size();
      values.push_back(parse_component(line.substr(start, end - start), no));
      start = end + 1;
    }
    if (first) {
      file = TweetVectorFile(values.size());
      first = false;
    } else if (values.size() != file.dim()) {
      throw ValidationError(at_line(no, "dimension " + std::to_string(values.size()) +
                                            " differs from " + std::to_string(file.dim())));
    }
    try {
      file.insert(std::move(id), values);
    } catch (const ValidationError& e) {
      throw ValidationError(at_line(no, e.what()));
    }
  });
  if (first) throw ValidationError("tweet vectors: file is empty");
  return file;
}

}  // namespace

bool WordVectorTable::insert(std::string term, std::span<const double> values) {
  if (values.size() != dim_) {
    throw ValidationError("word vector dimension " + std::to_string(values.size()) +
                          " differs from " + std::to_string(dim_));
  }
  auto [it, inserted] = rows_.try_emplace(std::move(term), rows_.size());
  if (inserted) {
    data_.insert(data_.end(), values.begin(), values.end());
  } else {
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    ++duplicates_;
  }
  return inserted;
}

std::optional<std::span<const double>> WordVectorTable::find(std::string_view term) const {
  auto it = rows_.find(std::string(term));
  if (it == rows_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

WordVectorTable parse_word_vectors(std::string_view content) {
  std::optional<WordVectorTable> table;
  std::size_t declared_count = 0;
  std::vector<std::string_view> fields;
  std::vector<double> values;
  for_each_line(content, [&](std::string_view line, std::size_t no) {
    split_fields(line, fields);
    if (!table) {
      if (fields.size() != 2) throw ValidationError(at_line(no, "expected header \"count dim\""));
      std::size_t dim = 0;
      auto parse = [&](std::string_view f, std::size_t& v) {
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || p != f.data() + f.size()) {
          throw ValidationError(at_line(no, "invalid header field '" + std::string(f) + "'"));
        }
      };
      parse(fields[0], declared_count);
      parse(fields[1], dim);
      if (dim == 0) throw ValidationError(at_line(no, "dimension must be positive"));
      table.emplace(dim);
      return;
    }
    if (fields.empty()) return;
    if (fields.size() - 1 != table->dim()) {
      throw ValidationError(at_line(no, "expected " + std::to_string(table->dim()) +
                                            " values, found " + std::to_string(fields.size() - 1)));
    }
    values.resize(table->dim());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = parse_component(fields[k + 1], no);
    if (!table->insert(std::string(fields[0]), values)) {
      std::cerr << "warning: word vectors line " << no << ": duplicate term '" << fields[0]
                << "', keeping the last occurrence\n";
    }
  });
  if (!table) throw ValidationError("word vectors: missing header");
  if (table->size() + table->duplicate_count() != declared_count) {
    std::cerr << "warning: word vectors header declares " << declared_count << " rows, read "
              << table->size() + table->duplicate_count() << "\n";
  }
  return std::move(*table);
}

WordVectorTable load_word_vectors(const std::filesystem::path& path) {
  std::string content = read_file(path);
  try {
    return parse_word_vectors(content);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

DenseVector average_embedding(std::span<const std::string> tokens, const WordVectorTable& table,
                              EmbeddingWeights weights, const Vocabulary* vocab) {
  if (weights == EmbeddingWeights::Idf && vocab == nullptr) {
    throw ValidationError("idf-weighted averaging requires a vocabulary");
  }
  const auto& k = simd::kernels();
  std::vector<double> acc(table.dim(), 0.0);
  double total_weight = 0.0;
  for (const auto& tok : tokens) {
    auto row = table.find(tok);
    if (!row) continue;
    double w = 1.0;
    if (weights == EmbeddingWeights::Idf) {
      auto idx = vocab->find(tok);
      if (!idx) continue;
      w = vocab->entry(*idx).idf;
    }
    k.axpy(w, row->data(), acc.data(), acc.size());
    total_weight += w;
  }
  if (total_weight > 0.0) {
    for (double& x : acc) x /= total_weight;
  }
  return DenseVector::normalized(std::move(acc));
}

void TweetVectorFile::insert(std::string id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw ValidationError("tweet vector dimension " + std::to_string(values.size()) +
                          " differs from " + std::to_string(dim_));
  }
  if (rows_.contains(id)) throw ValidationError("duplicate tweet vector id: " + id);
  rows_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  vectors_.push_back(DenseVector::normalized({values.begin(), values.end()}));
}

const DenseVector* TweetVectorFile::find(std::string_view id) const {
  auto it = rows_.find(std::string(id));
  return it == rows_.end() ? nullptr : &vectors_[it->second];
}

const DenseVector& TweetVectorFile::at(std::string_view id) const {
  if (const auto* v = find(id)) return *v;
  throw MissingResourceError("no precomputed vector for tweet id " + std::string(id));
}

TweetVectorFile parse_tweet_vectors(std::string_view content) {
  if (content.size() >= sizeof kBinaryMagic &&
      std::memcmp(content.data(), kBinaryMagic, sizeof kBinaryMagic) == 0) {
    return parse_binary(content);
  }
  return parse_tsv(content);
}

TweetVectorFile load_tweet_vectors(const std::filesystem::path& path) {
  std::string content = read_file(path);
  try {
    return parse_tweet_vectors(content);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string serialize_tweet_vectors(const TweetVectorFile& file, TweetVectorFormat format) {
  std::string out;
  if (format == TweetVectorFormat::Binary) {
    out.append(kBinaryMagic, sizeof kBinaryMagic);
    write_u32_le(out, static_cast<std::uint32_t>(file.size()));
    write_u32_le(out, static_cast<std::uint32_t>(file.dim()));
    for (const auto& id : file.ids()) {
      write_u32_le(out, static_cast<std::uint32_t>(id.size()));
      out += id;
      for (double x : file.at(id).values()) write_f32_le(out, static_cast<float>(x));
    }
    return out;
  }
  char buf[64];
  for (const auto& id : file.ids()) {
    out += id;
    for (double x : file.at(id).values()) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out += '\t';
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

void save_tweet_vectors(const TweetVectorFile& file, const std::filesystem::path& path,
                        TweetVectorFormat format) {
  write_file_atomic(path, serialize_tweet_vectors(file, format));
}

}  // namespace fsd
