#include "fsd/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "fsd/error.hpp"
#include "fsd/io.hpp"

namespace fsd {

namespace {

constexpr std::string_view kMagic = "#fsd-vocabulary v1";

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("vocabulary: invalid " + std::string(what) + " '" +
                          std::string(text) + "'");
  }
  return value;
}

}  // namespace

CountingMode parse_counting_mode(std::string_view name) {
  if (name == "dataset") return CountingMode::Dataset;
  if (name == "all_tweets" || name == "all-tweets") return CountingMode::AllTweets;
  throw ValidationError("unknown counting mode '" + std::string(name) + "'");
}

std::string_view to_string(CountingMode mode) {
  return mode == CountingMode::Dataset ? "dataset" : "all_tweets";
}

double idf_weight(std::int64_t df, std::int64_t n_docs) {
  if (df < 1) throw ValidationError("idf_weight: df must be >= 1 (term absent from corpus)");
  if (df > n_docs) throw ValidationError("idf_weight: df exceeds document count");
  if (df == n_docs) return 1.0;
  return 1.0 + std::log(static_cast<double>(n_docs + 1) / static_cast<double>(df + 1));
}

std::optional<TermIndex> Vocabulary::find(std::string_view term) const {
  auto it = lookup_.find(std::string(term));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::index_terms() {
  lookup_.clear();
  lookup_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    lookup_.emplace(entries_[i].term, static_cast<TermIndex>(i));
  }
}

Vocabulary build_vocabulary(std::span<const TokenList> docs, const StopwordSet& stopwords,
                            std::int64_t df_min, CountingMode mode) {
  if (df_min < 1) throw ValidationError("df_min must be >= 1");
  if (docs.empty()) throw ValidationError("cannot build a vocabulary from zero documents");

  std::unordered_map<std::string, std::int64_t> df;
  std::vector<std::string_view> distinct;
  for (const auto& doc : docs) {
    distinct.assign(doc.begin(), doc.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto term : distinct) ++df[std::string(term)];
  }

  Vocabulary vocab;
  vocab.n_docs_ = static_cast<std::int64_t>(docs.size());
  vocab.df_min_ = df_min;
  vocab.mode_ = mode;
  vocab.stopwords_ = stopwords;
  for (auto& [term, count] : df) {
    if (count < df_min || stopwords.contains(term)) continue;
    vocab.entries_.push_back({term, count, idf_weight(count, vocab.n_docs_)});
  }
  std::sort(vocab.entries_.begin(), vocab.entries_.end(),
            [](const auto& a, const auto& b) { return a.term < b.term; });
  vocab.index_terms();
  return vocab;
}

std::string Vocabulary::serialize() const {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "mode\t" << to_string(mode_) << '\n';
  out << "df_min\t" << df_min_ << '\n';
  out << "n_docs\t" << n_docs_ << '\n';
  out << "terms\t" << entries_.size() << '\n';
  std::vector<std::string_view> stops(stopwords_.begin(), stopwords_.end());
  std::sort(stops.begin(), stops.end());
  out << "stopwords\t" << stops.size() << '\n';
  for (auto s : stops) out << s << '\n';
  for (const auto& e : entries_) out << e.term << '\t' << e.df << '\n';
  return out.str();
}

Vocabulary Vocabulary::parse(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  std::size_t cursor = 0;
  auto next = [&]() -> std::string_view {
    if (cursor >= lines.size()) throw ValidationError("vocabulary: truncated file");
    return lines[cursor++];
  };
  auto field = [&](std::string_view key) {
    auto line = next();
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.substr(0, tab) != key) {
      throw ValidationError("vocabulary: expected field '" + std::string(key) + "'");
    }
    return line.substr(tab + 1);
  };

  if (next() != kMagic) throw ValidationError("vocabulary: bad magic line");
  Vocabulary vocab;
  vocab.mode_ = parse_counting_mode(field("mode"));
  vocab.df_min_ = parse_int(field("df_min"), "df_min");
  vocab.n_docs_ = parse_int(field("n_docs"), "n_docs");
  const auto n_terms = parse_int(field("terms"), "terms");
  const auto n_stops = parse_int(field("stopwords"), "stopwords");
  for (std::int64_t i = 0; i < n_stops; ++i) vocab.stopwords_.emplace(next());
  vocab.entries_.reserve(static_cast<std::size_t>(n_terms));
  for (std::int64_t i = 0; i < n_terms; ++i) {
    auto line = next();
    auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw ValidationError("vocabulary: malformed term line");
    std::string term(line.substr(0, tab));
    const auto df = parse_int(line.substr(tab + 1), "df");
    if (df < vocab.df_min_ || df > vocab.n_docs_) {
      throw ValidationError("vocabulary: df out of range for term '" + term + "'");
    }
    if (!vocab.entries_.empty() && !(vocab.entries_.back().term < term)) {
      throw ValidationError("vocabulary: terms not strictly sorted");
    }
    vocab.entries_.push_back({std::move(term), df, idf_weight(df, vocab.n_docs_)});
  }
  vocab.index_terms();
  return vocab;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  write_file_atomic(path, serialize());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

StopwordSet parse_stopwords(std::string_view content) {
  StopwordSet words;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') words.emplace(line);
    start = end + 1;
  }
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(read_file(path));
}

SparseVector vectorize_idf(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::vector<SparseEntry> entries;
  entries.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (auto idx = vocab.find(tok)) entries.push_back({*idx, vocab.entry(*idx).idf});
  }
  // Binary presence: a repeated term counts once.
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const SparseEntry& a, const SparseEntry& b) {
                              return a.index == b.index;
                            }),
                entries.end());
  return SparseVector::normalized(std::move(entries));
}

}  // namespace fsd
