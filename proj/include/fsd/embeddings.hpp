#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsd/vectors.hpp"
#include "fsd/vocabulary.hpp"

namespace fsd {

/// Raw (unnormalized) word vectors in a contiguous row-major matrix.
class WordVectorTable {
 public:
  WordVectorTable() = default;
  explicit WordVectorTable(std::size_t dim) : dim_(dim) {}

  /// Inserts or replaces. Returns false when the term already existed.
  bool insert(std::string term, std::span<const double> values);

  std::optional<std::span<const double>> find(std::string_view term) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> rows_;
  std::size_t duplicates_ = 0;
};

/// word2vec text format: "count dim" header then "term v1 ... vdim" lines.
/// Duplicate terms: last wins and a warning goes to stderr.
WordVectorTable load_word_vectors(const std::filesystem::path& path);
WordVectorTable parse_word_vectors(std::string_view content);

enum class EmbeddingWeights { Uniform, Idf };

/// Mean (or idf-weighted mean) of the vectors of tokens present in `table`,
/// L2-normalized. With Idf weights, tokens outside `vocab` are skipped.
DenseVector average_embedding(std::span<const std::string> tokens,
                              const WordVectorTable& table,
                              EmbeddingWeights weights,
                              const Vocabulary* vocab = nullptr);

/// Precomputed per-tweet embeddings, normalized on load.
class TweetVectorFile {
 public:
  TweetVectorFile() = default;
  explicit TweetVectorFile(std::size_t dim) : dim_(dim) {}

  /// Normalizes and stores; dimension must match, ids must be unique.
  void insert(std::string id, std::span<const double> values);

  const DenseVector& at(std::string_view id) const;  // MissingResourceError
  const DenseVector* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<DenseVector> vectors_;
  std::unordered_map<std::string, std::size_t> rows_;
};

enum class TweetVectorFormat { Tsv, Binary };

/// Detects the binary layout by its magic bytes, TSV otherwise.
TweetVectorFile load_tweet_vectors(const std::filesystem::path& path);
TweetVectorFile parse_tweet_vectors(std::string_view content);

// Binary layout (little-endian): "TWVEC1\0\0", u32 count, u32 dim, then per
// record u32 id byte length, id bytes, dim float32 components.
std::string serialize_tweet_vectors(const TweetVectorFile& file,
                                    TweetVectorFormat format);
void save_tweet_vectors(const TweetVectorFile& file,
                        const std::filesystem::path& path,
                        TweetVectorFormat format);

}  // namespace fsd
