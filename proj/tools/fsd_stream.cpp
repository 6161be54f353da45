// fsd-stream: command-line driver for vocabulary building, vectorization,
// streaming clustering, threshold sweeps, evaluation and classification.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fsd/classify.hpp"
#include "fsd/cluster.hpp"
#include "fsd/config.hpp"
#include "fsd/embeddings.hpp"
#include "fsd/error.hpp"
#include "fsd/evaluate.hpp"
#include "fsd/io.hpp"
#include "fsd/pipeline.hpp"
#include "fsd/simd/kernels.hpp"

namespace {

using fsd::RunConfig;
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string corpus;
  std::string format;
  std::string vectors;
  std::optional<double> threshold;
  std::optional<std::size_t> window;
  std::optional<std::size_t> batch_size;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::optional<std::int64_t> df_min;
  std::string stopwords;
  std::string vocab;
  std::string counting_corpus;
  std::string word_vectors;
  std::string external;
  std::string grid;
  std::optional<double> svm_c;
  std::optional<double> fraction;
  std::optional<std::size_t> threads;
  bool annotated_only = false;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "INI config file");
  cmd->add_option("--corpus", f.corpus, "corpus file (.jsonl or .tsv)");
  cmd->add_option("--format", f.format, "corpus format: jsonl|tsv");
  cmd->add_option("--vectors", f.vectors,
                  "idf-dataset|idf-all-tweets|w2v-mean|w2v-idf-mean|external");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--df-min", f.df_min, "minimum document frequency");
  cmd->add_option("--stopwords", f.stopwords, "stopword list path or bundled name (en, fr)");
  cmd->add_option("--vocab", f.vocab, "prebuilt vocabulary file");
  cmd->add_option("--counting-corpus", f.counting_corpus, "corpus counted for all-tweets idf statistics");
  cmd->add_option("--word-vectors", f.word_vectors, "word2vec text file");
  cmd->add_option("--external-vectors", f.external, "precomputed tweet vectors (TSV or TWVEC1)");
  cmd->add_option("--threads", f.threads, "worker threads (also capped by FSD_STREAM_THREADS)");
  cmd->add_flag("--annotated-only", f.annotated_only, "drop unannotated tweets after loading");
}

void add_fsd_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--threshold", f.threshold, "merge threshold on cosine distance");
  cmd->add_option("--window", f.window, "window size in documents (0 = one day)");
  cmd->add_option("--batch-size", f.batch_size, "mini-batch size (default 8)");
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : RunConfig::from_ini(f.config);
  if (!f.corpus.empty()) c.corpus_path = f.corpus;
  if (!f.format.empty()) c.corpus_format = fsd::parse_corpus_format(f.format);
  if (f.annotated_only) c.annotated_only = true;
  if (!f.vectors.empty()) c.source = fsd::parse_vector_source(f.vectors);
  if (f.threshold) c.threshold = *f.threshold;
  if (f.window) c.window = *f.window;
  if (f.batch_size) c.batch_size = *f.batch_size;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.seed) c.seeds = {*f.seed};
  if (!f.seeds.empty()) c.seeds = fsd::parse_seed_list(f.seeds);
  if (f.df_min) c.df_min = *f.df_min;
  if (!f.stopwords.empty()) c.stopwords = f.stopwords;
  if (!f.vocab.empty()) c.vocabulary_path = f.vocab;
  if (!f.counting_corpus.empty()) c.counting_corpus_path = f.counting_corpus;
  if (!f.word_vectors.empty()) c.word_vectors_path = f.word_vectors;
  if (!f.external.empty()) c.external_vectors_path = f.external;
  if (!f.grid.empty()) c.sweep_thresholds = fsd::parse_real_list(f.grid);
  if (f.svm_c) c.svm_c = *f.svm_c;
  if (f.fraction) c.split_fraction = *f.fraction;
  if (f.threads) c.threads = *f.threads;
  return c;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  fsd::write_file_atomic(path, j.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t resolve_window(const RunConfig& c, const fsd::Corpus& corpus) {
  return c.window > 0 ? c.window : fsd::window_for_one_day(corpus);
}

int cmd_build_vocab(const RunConfig& c, const std::string& mode_flag) {
  c.validate("build-vocab");
  fsd::CountingMode mode = c.source == fsd::VectorSourceKind::IdfDataset
                               ? fsd::CountingMode::Dataset
                               : fsd::CountingMode::AllTweets;
  if (!mode_flag.empty()) mode = fsd::parse_counting_mode(mode_flag);
  const auto corpus = fsd::load_run_corpus(c);
  const auto vocab = fsd::build_run_vocabulary(c, corpus, mode);
  const fs::path path = c.vocabulary_path.empty() ? c.output_dir / "vocabulary.tsv" : c.vocabulary_path;
  vocab.save(path);
  std::printf("vocabulary: %zu terms (mode=%s, df_min=%lld, n_docs=%lld) -> %s\n", vocab.size(),
              std::string(fsd::to_string(vocab.mode())).c_str(),
              static_cast<long long>(vocab.df_min()), static_cast<long long>(vocab.n_docs()),
              path.string().c_str());
  return 0;
}

int cmd_vectorize(const RunConfig& c) {
  c.validate("vectorize");
  const auto corpus = fsd::load_run_corpus(c);
  const auto run = fsd::build_run_vectors(c, corpus);
  fs::path path;
  if (c.source == fsd::VectorSourceKind::IdfDataset || c.source == fsd::VectorSourceKind::IdfAllTweets) {
    std::string out = "id\tentries\n";
    char buf[64];
    for (const auto& t : corpus) {
      out += t.id;
      out += '\t';
      const auto& sv = std::get<fsd::SparseVector>(*run.vectors.find(t.id));
      bool first = true;
      for (const auto& e : sv.entries()) {
        if (!first) out += ' ';
        first = false;
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.weight);
        out += std::to_string(e.index);
        out += ':';
        out.append(buf, end);
      }
      out += '\n';
    }
    path = c.output_dir / "vectors.sparse.tsv";
    fsd::write_file_atomic(path, out);
  } else {
    std::size_t dim = 0;
    for (const auto& t : corpus) {
      dim = std::get<fsd::DenseVector>(*run.vectors.find(t.id)).dim();
      break;
    }
    fsd::TweetVectorFile file(dim);
    for (const auto& t : corpus) {
      const auto values = std::get<fsd::DenseVector>(*run.vectors.find(t.id)).values();
      file.insert(t.id, values);
    }
    path = c.output_dir / "vectors.twvec";
    fsd::save_tweet_vectors(file, path, fsd::TweetVectorFormat::Binary);
  }
  write_json(c.output_dir / "vectorize.json",
             {{"command", "vectorize"},
              {"n_docs", corpus.size()},
              {"empty_vectors", run.empty_count},
              {"vocabulary_terms", run.vocabulary ? run.vocabulary->size() : 0},
              {"output", path.string()},
              {"config", c.to_json()}});
  std::printf("vectorized %zu tweets (%zu empty) -> %s\n", corpus.size(), run.empty_count,
              path.string().c_str());
  return 0;
}

int cmd_cluster(const RunConfig& c) {
  c.validate("cluster");
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = fsd::load_run_corpus(c);
  const auto run = fsd::build_run_vectors(c, corpus);
  fsd::FsdParams params{c.threshold, resolve_window(c, corpus), c.batch_size};
  fsd::FsdOptions options;
  options.threads = c.threads;
  const auto cluster_start = std::chrono::steady_clock::now();
  const auto assignment = fsd::fsd_cluster(corpus, run.vectors, params, options);
  const double cluster_seconds = seconds_since(cluster_start);

  fsd::write_file_atomic(c.output_dir / "assignment.tsv", assignment.to_tsv());
  nlohmann::json meta = {{"command", "cluster"},
                         {"threshold", params.threshold},
                         {"window", params.window},
                         {"batch_size", params.batch_size},
                         {"vector_source", run.vectors.describe()},
                         {"n_docs", corpus.size()},
                         {"n_threads", assignment.thread_count()},
                         {"empty_vectors", run.empty_count},
                         {"simd", std::string(fsd::simd::to_string(fsd::simd::kernels().isa))},
                         {"runtime_seconds", seconds_since(start)},
                         {"cluster_seconds", cluster_seconds},
                         {"config", c.to_json()}};
  const auto gold = fsd::gold_labels(corpus);
  if (!gold.empty()) {
    const auto report = fsd::best_matching_f1(assignment, gold);
    auto j = report.to_json();
    j["config"] = c.to_json();
    j["threshold"] = params.threshold;
    j["window"] = params.window;
    write_json(c.output_dir / "eval.json", j);
    meta["best_matching_f1"] = report.score;
    std::fputs(report.to_table().c_str(), stdout);
  }
  write_json(c.output_dir / "run.json", meta);
  std::printf("clustered %zu tweets into %zu threads (t=%g, w=%zu, batch=%zu)\n", corpus.size(),
              assignment.thread_count(), params.threshold, params.window, params.batch_size);
  return 0;
}

int cmd_sweep(const RunConfig& c) {
  c.validate("sweep");
  const auto corpus = fsd::load_run_corpus(c);
  const auto run = fsd::build_run_vectors(c, corpus);
  const std::size_t window = resolve_window(c, corpus);
  const auto grid = c.sweep_thresholds.empty() ? fsd::default_threshold_grid() : c.sweep_thresholds;
  fsd::FsdOptions options;
  options.threads = c.threads;
  const auto result = fsd::sweep_threshold(corpus, run.vectors, window, grid, c.batch_size, options);

  std::string tsv = "threshold\tf1\tn_clusters\n";
  nlohmann::json rows = nlohmann::json::array();
  char buf[128];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.4f\t%.6f\t%zu\n", r.threshold, r.f1, r.n_clusters);
    tsv += buf;
    rows.push_back({{"threshold", r.threshold}, {"f1", r.f1}, {"n_clusters", r.n_clusters}});
  }
  fsd::write_file_atomic(c.output_dir / "sweep.tsv", tsv);
  const auto& best = result.rows[result.best];
  write_json(c.output_dir / "sweep.json", {{"command", "sweep"},
                                           {"window", window},
                                           {"batch_size", c.batch_size},
                                           {"vector_source", run.vectors.describe()},
                                           {"rows", rows},
                                           {"best", {{"threshold", best.threshold},
                                                     {"f1", best.f1},
                                                     {"n_clusters", best.n_clusters}}},
                                           {"config", c.to_json()}});
  std::fputs(tsv.c_str(), stdout);
  std::printf("best: t=%g F1=%.2f%% (%zu clusters)\n", best.threshold, 100.0 * best.f1,
              best.n_clusters);
  return 0;
}

int cmd_classify(const RunConfig& c) {
  c.validate("classify");
  const auto corpus = fsd::load_run_corpus(c);
  const auto run = fsd::build_run_vectors(c, corpus);
  const auto report =
      fsd::run_classification(corpus, run.vectors, c.svm_c, c.seeds, c.split_fraction);
  for (const auto& r : report.runs) {
    write_json(c.output_dir / ("models_seed" + std::to_string(r.seed) + ".json"),
               fsd::models_to_json(r.models));
  }
  auto j = report.to_json();
  j["vector_source"] = run.vectors.describe();
  j["config"] = c.to_json();
  write_json(c.output_dir / "classification.json", j);
  for (const auto& r : report.runs) {
    std::printf("seed %llu: macro-F1 %.2f%% (train %zu, test %zu)\n",
                static_cast<unsigned long long>(r.seed), 100.0 * r.macro_f1, r.n_train, r.n_test);
  }
  std::printf("macro-F1 %s\n", report.formatted().c_str());
  return 0;
}

int cmd_evaluate(const RunConfig& c, const std::string& assignment_path) {
  c.validate("evaluate");
  if (assignment_path.empty()) throw fsd::ValidationError("evaluate needs --assignment PATH");
  const auto corpus = fsd::load_run_corpus(c);
  const auto assignment = fsd::ThreadAssignment::from_tsv(fsd::read_file(assignment_path));
  const auto report = fsd::best_matching_f1(assignment, fsd::gold_labels(corpus));
  auto j = report.to_json();
  j["assignment"] = assignment_path;
  j["config"] = c.to_json();
  write_json(c.output_dir / "eval.json", j);
  std::fputs(report.to_table().c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming first story detection and evaluation for short texts"};
  app.require_subcommand(1);
  Flags f;
  std::string mode;
  std::string assignment;

  auto* build_vocab = app.add_subcommand("build-vocab", "count document frequencies into a vocabulary file");
  add_common_flags(build_vocab, f);
  build_vocab->add_option("--mode", mode, "dataset|all_tweets (default follows --vectors)");

  auto* vectorize = app.add_subcommand("vectorize", "write one vector per tweet");
  add_common_flags(vectorize, f);

  auto* cluster = app.add_subcommand("cluster", "mini-batch first story detection");
  add_common_flags(cluster, f);
  add_fsd_flags(cluster, f);

  auto* sweep = app.add_subcommand("sweep", "cluster over a threshold grid and score each run");
  add_common_flags(sweep, f);
  add_fsd_flags(sweep, f);
  sweep->add_option("--grid", f.grid, "comma-separated thresholds (default 0.02..0.80 step 0.01)");

  auto* classify = app.add_subcommand("classify", "one-vs-rest triangular-kernel SVM, macro-F1 over seeds");
  add_common_flags(classify, f);
  classify->add_option("--seed", f.seed, "single seed");
  classify->add_option("--seeds", f.seeds, "comma-separated seeds (default 0,1,2,3,4)");
  classify->add_option("--C", f.svm_c, "SVM regularization (default 1.0)");
  classify->add_option("--fraction", f.fraction, "train fraction (default 0.5)");

  auto* evaluate = app.add_subcommand("evaluate", "best-matching F1 of an assignment file");
  add_common_flags(evaluate, f);
  evaluate->add_option("--assignment", assignment, "assignment TSV from the cluster command");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(fsd::ErrorKind::Validation);
  }

  try {
    const RunConfig config = resolve(f);
    if (*build_vocab) return cmd_build_vocab(config, mode);
    if (*vectorize) return cmd_vectorize(config);
    if (*cluster) return cmd_cluster(config);
    if (*sweep) return cmd_sweep(config);
    if (*classify) return cmd_classify(config);
    if (*evaluate) return cmd_evaluate(config, assignment);
  } catch (const fsd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(fsd::ErrorKind::Invariant);
  }
  return 0;
}
