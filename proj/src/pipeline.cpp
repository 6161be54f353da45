#include "fsd/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "fsd/embeddings.hpp"
#include "fsd/error.hpp"
#include "fsd/evaluate.hpp"

namespace fsd {

Corpus load_run_corpus(const RunConfig& config) {
  Corpus corpus = load_corpus(config.corpus_path, config.resolved_corpus_format());
  return config.annotated_only ? corpus.annotated_subset() : corpus;
}

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const TokenizerConfig& config) {
  std::vector<TokenList> docs;
  docs.reserve(corpus.size());
  for (const auto& t : corpus) docs.push_back(tokenize(t.text, config));
  return docs;
}

StopwordSet resolve_stopwords(const RunConfig& config) {
  if (config.stopwords.empty()) return {};
  if (auto bundled = bundled_stopwords(config.stopwords)) return load_stopwords(*bundled);
  return load_stopwords(config.stopwords);
}

Vocabulary build_run_vocabulary(const RunConfig& config, const Corpus& corpus, CountingMode mode) {
  const StopwordSet stops = resolve_stopwords(config);
  if (mode == CountingMode::Dataset) {
    Corpus annotated = corpus.annotated_subset();
    if (annotated.empty()) throw ValidationError("dataset counting needs annotated tweets");
    return build_vocabulary(tokenize_corpus(annotated, config.tokenizer), stops, config.df_min, mode);
  }
  if (!config.counting_corpus_path.empty()) {
    Corpus counting = load_corpus(config.counting_corpus_path,
                                  guess_corpus_format(config.counting_corpus_path));
    return build_vocabulary(tokenize_corpus(counting, config.tokenizer), stops, config.df_min, mode);
  }
  return build_vocabulary(tokenize_corpus(corpus, config.tokenizer), stops, config.df_min, mode);
}

namespace {

std::shared_ptr<const Vocabulary> obtain_vocabulary(const RunConfig& config, const Corpus& corpus,
                                                    CountingMode mode) {
  if (!config.vocabulary_path.empty()) {
    auto vocab = std::make_shared<Vocabulary>(Vocabulary::load(config.vocabulary_path));
    if (vocab->mode() != mode) {
      throw ValidationError("vocabulary " + config.vocabulary_path.string() + " was built in " +
                            std::string(to_string(vocab->mode())) + " mode, source needs " +
                            std::string(to_string(mode)));
    }
    return vocab;
  }
  return std::make_shared<Vocabulary>(build_run_vocabulary(config, corpus, mode));
}

}  // namespace

RunVectors build_run_vectors(const RunConfig& config, const Corpus& corpus) {
  RunVectors out;
  out.vectors = VectorMap(std::string(to_string(config.source)));
  auto add = [&](const std::string& id, DocVector v) {
    if (is_empty(v)) ++out.empty_count;
    out.vectors.insert(id, std::move(v));
  };

  switch (config.source) {
    case VectorSourceKind::IdfDataset:
    case VectorSourceKind::IdfAllTweets: {
      const auto mode = config.source == VectorSourceKind::IdfDataset ? CountingMode::Dataset
                                                                      : CountingMode::AllTweets;
      out.vocabulary = obtain_vocabulary(config, corpus, mode);
      for (const auto& t : corpus) add(t.id, vectorize_idf(tokenize(t.text, config.tokenizer), *out.vocabulary));
      break;
    }
    case VectorSourceKind::W2vMean:
    case VectorSourceKind::W2vIdfMean: {
      const bool weighted = config.source == VectorSourceKind::W2vIdfMean;
      if (weighted) out.vocabulary = obtain_vocabulary(config, corpus, CountingMode::AllTweets);
      const WordVectorTable table = load_word_vectors(config.word_vectors_path);
      for (const auto& t : corpus) {
        add(t.id, average_embedding(tokenize(t.text, config.tokenizer), table,
                                    weighted ? EmbeddingWeights::Idf : EmbeddingWeights::Uniform,
                                    out.vocabulary.get()));
      }
      break;
    }
    case VectorSourceKind::External: {
      const TweetVectorFile file = load_tweet_vectors(config.external_vectors_path);
      for (const auto& t : corpus) add(t.id, file.at(t.id));
      break;
    }
  }
  return out;
}

ClassificationReport run_classification(const Corpus& corpus, const VectorSource& vectors,
                                        double C, std::span<const std::uint64_t> seeds,
                                        double fraction) {
  if (seeds.empty()) throw ValidationError("classification needs at least one seed");
  ClassificationReport report;
  for (std::uint64_t seed : seeds) {
    auto [train, test] = split_train_test(corpus, fraction, seed);
    if (test.empty()) throw ValidationError("split left no test tweets");

    auto lookup = [&](const Tweet& t) -> const DocVector& {
      const DocVector* v = vectors.find(t.id);
      if (!v) throw MissingResourceError("no vector for document id " + t.id);
      return *v;
    };
    std::vector<LabeledVector> examples;
    examples.reserve(train.size());
    for (const auto& t : train) examples.push_back({t.id, *t.event_id, lookup(t)});

    SvmParams params;
    params.C = C;
    params.seed = seed;
    auto models = train_ovr_svm(examples, params);

    std::vector<DocVector> xs;
    xs.reserve(test.size());
    for (const auto& t : test) xs.push_back(lookup(t));
    const auto labels = predict_batch(models, xs);

    LabelMap predicted, gold;
    for (std::size_t i = 0; i < test.size(); ++i) {
      predicted.emplace(test[i].id, labels[i]);
      gold.emplace(test[i].id, *test[i].event_id);
    }
    report.runs.push_back({seed, macro_f1(predicted, gold), train.size(), test.size(),
                           std::move(models)});
  }
  double sum = 0.0;
  for (const auto& r : report.runs) sum += r.macro_f1;
  report.mean = sum / static_cast<double>(report.runs.size());
  double sq = 0.0;
  for (const auto& r : report.runs) sq += (r.macro_f1 - report.mean) * (r.macro_f1 - report.mean);
  report.stddev = std::sqrt(sq / static_cast<double>(report.runs.size()));
  return report;
}

nlohmann::json ClassificationReport::to_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) {
    runs_json.push_back({{"seed", r.seed},
                         {"macro_f1", r.macro_f1},
                         {"n_train", r.n_train},
                         {"n_test", r.n_test}});
  }
  return {{"metric", "macro_f1"},
          {"kernel", "triangular"},
          {"mean", mean},
          {"std", stddev},
          {"formatted", formatted()},
          {"runs", std::move(runs_json)}};
}

std::string ClassificationReport::formatted() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", 100.0 * mean, 100.0 * stddev);
  return buf;
}

}  // namespace fsd
