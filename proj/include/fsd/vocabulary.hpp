#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsd/tokenize.hpp"
#include "fsd/vectors.hpp"

namespace fsd {

using StopwordSet = std::unordered_set<std::string>;

// Which documents are counted for n and df: the annotated subset only, or
// every tweet in the stream.
enum class CountingMode { Dataset, AllTweets };

CountingMode parse_counting_mode(std::string_view name);
std::string_view to_string(CountingMode mode);

/// Smoothed idf: 1 + ln((n_docs + 1) / (df + 1)). Requires 1 <= df <= n_docs.
double idf_weight(std::int64_t df, std::int64_t n_docs);

class Vocabulary {
 public:
  struct Entry {
    std::string term;
    std::int64_t df;
    double idf;
  };

  Vocabulary() = default;

  std::optional<TermIndex> find(std::string_view term) const;
  const Entry& entry(TermIndex index) const { return entries_.at(index); }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::int64_t n_docs() const { return n_docs_; }
  std::int64_t df_min() const { return df_min_; }
  CountingMode mode() const { return mode_; }
  const StopwordSet& stopwords() const { return stopwords_; }

  /// Text serialization; byte-identical for identical vocabularies.
  std::string serialize() const;
  static Vocabulary parse(std::string_view content);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend Vocabulary build_vocabulary(std::span<const TokenList> docs,
                                     const StopwordSet& stopwords,
                                     std::int64_t df_min, CountingMode mode);

 private:
  void index_terms();

  std::vector<Entry> entries_;  // sorted by term; position is the index
  std::unordered_map<std::string, TermIndex> lookup_;
  std::int64_t n_docs_ = 0;
  std::int64_t df_min_ = 1;
  CountingMode mode_ = CountingMode::Dataset;
  StopwordSet stopwords_;
};

/// Counts document frequency (presence, not occurrences) over `docs`, drops
/// stopwords and terms with df < df_min. Term indices follow lexicographic
/// byte order of the terms.
Vocabulary build_vocabulary(std::span<const TokenList> docs,
                            const StopwordSet& stopwords, std::int64_t df_min,
                            CountingMode mode = CountingMode::Dataset);

/// One word per line; blank lines and lines starting with '#' are skipped.
StopwordSet load_stopwords(const std::filesystem::path& path);
StopwordSet parse_stopwords(std::string_view content);

/// Binary-presence idf vector: each distinct in-vocabulary token contributes
/// idf(term) once; the result is L2-normalized.
SparseVector vectorize_idf(std::span<const std::string> tokens,
                           const Vocabulary& vocab);

}  // namespace fsd
