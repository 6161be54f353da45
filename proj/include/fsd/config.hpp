#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsd/corpus.hpp"
#include "fsd/tokenize.hpp"

namespace fsd {

enum class VectorSourceKind { IdfDataset, IdfAllTweets, W2vMean, W2vIdfMean, External };

VectorSourceKind parse_vector_source(std::string_view name);
std::string_view to_string(VectorSourceKind kind);

/// Resolved settings for one CLI invocation. Loaded from an INI-style file
/// ([section] + key = value), then overridden by command-line flags.
struct RunConfig {
  std::filesystem::path corpus_path;
  std::optional<CorpusFormat> corpus_format;  // guessed from the extension when unset
  bool annotated_only = false;

  TokenizerConfig tokenizer;

  VectorSourceKind source = VectorSourceKind::IdfAllTweets;
  std::int64_t df_min = 10;
  std::string stopwords;  // path, or a bundled list name ("en", "fr"); empty = none
  std::filesystem::path vocabulary_path;      // prebuilt vocabulary (optional)
  std::filesystem::path counting_corpus_path; // corpus for all-tweets counts (optional)
  std::filesystem::path word_vectors_path;
  std::filesystem::path external_vectors_path;

  double threshold = 0.75;
  std::size_t window = 0;  // 0 = about one day of traffic
  std::size_t batch_size = 8;

  std::vector<double> sweep_thresholds;  // empty = default grid

  double svm_c = 1.0;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double split_fraction = 0.5;

  std::filesystem::path output_dir = "out";
  bool output_dir_from_config = false;  // relative dirs from a file resolve against it
  std::size_t threads = 0;

  static RunConfig from_ini(const std::filesystem::path& path);
  static RunConfig from_ini_string(std::string_view content);

  /// Checks ranges and that every path this command needs exists.
  void validate(std::string_view command) const;

  CorpusFormat resolved_corpus_format() const;
  nlohmann::json to_json() const;
};

/// Bundled stopword list path for a language tag, if one ships.
std::optional<std::filesystem::path> bundled_stopwords(std::string_view language);

std::vector<double> parse_real_list(std::string_view text);
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace fsd
