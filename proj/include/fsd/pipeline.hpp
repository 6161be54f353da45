#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsd/classify.hpp"
#include "fsd/config.hpp"
#include "fsd/corpus.hpp"
#include "fsd/vector_source.hpp"
#include "fsd/vocabulary.hpp"

// Glue between RunConfig and the modules: corpus loading, vocabulary and
// vector construction, and the repeated-split classification experiment.

namespace fsd {

Corpus load_run_corpus(const RunConfig& config);

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const TokenizerConfig& config);

StopwordSet resolve_stopwords(const RunConfig& config);

/// Dataset mode counts the annotated tweets of `corpus`; all-tweets mode
/// counts the configured counting corpus, or every tweet of `corpus`.
Vocabulary build_run_vocabulary(const RunConfig& config, const Corpus& corpus, CountingMode mode);

struct RunVectors {
  VectorMap vectors;
  std::shared_ptr<const Vocabulary> vocabulary;  // null for external sources
  std::size_t empty_count = 0;
};

/// One vector per tweet of `corpus` from the configured source.
RunVectors build_run_vectors(const RunConfig& config, const Corpus& corpus);

struct ClassificationRun {
  std::uint64_t seed;
  double macro_f1;
  std::size_t n_train;
  std::size_t n_test;
  std::vector<KernelSvmModel> models;
};

struct ClassificationReport {
  std::vector<ClassificationRun> runs;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over seeds

  nlohmann::json to_json() const;
  /// "83.50 ± 0.78" in percent.
  std::string formatted() const;
};

/// Split the annotated tweets with each seed, train the one-vs-rest SVM on
/// the train part and score macro-F1 on the rest.
ClassificationReport run_classification(const Corpus& corpus, const VectorSource& vectors,
                                        double C, std::span<const std::uint64_t> seeds,
                                        double fraction);

}  // namespace fsd
