#include "fsd/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fsd/error.hpp"
#include "fsd/io.hpp"

#ifndef FSD_RESOURCE_DIR
#define FSD_RESOURCE_DIR "resources"
#endif

namespace fsd {

namespace pt = boost::property_tree;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config " + key + ": expected a boolean, got '" + std::string(v) + "'");
}

template <class T>
T parse_number(const std::string& key, std::string_view v) {
  v = trim(v);
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("config " + key + ": invalid number '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

VectorSourceKind parse_vector_source(std::string_view name) {
  if (name == "idf-dataset" || name == "tfidf-dataset") return VectorSourceKind::IdfDataset;
  if (name == "idf-all-tweets" || name == "tfidf-all-tweets") return VectorSourceKind::IdfAllTweets;
  if (name == "w2v-mean") return VectorSourceKind::W2vMean;
  if (name == "w2v-idf-mean") return VectorSourceKind::W2vIdfMean;
  if (name == "external") return VectorSourceKind::External;
  throw ValidationError("unknown vector source '" + std::string(name) + "'");
}

std::string_view to_string(VectorSourceKind kind) {
  switch (kind) {
    case VectorSourceKind::IdfDataset: return "idf-dataset";
    case VectorSourceKind::IdfAllTweets: return "idf-all-tweets";
    case VectorSourceKind::W2vMean: return "w2v-mean";
    case VectorSourceKind::W2vIdfMean: return "w2v-idf-mean";
    case VectorSourceKind::External: return "external";
  }
  return "unknown";
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(parse_number<double>("list", item));
    start = end + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(parse_number<std::uint64_t>("seeds", item));
    start = end + 1;
  }
  return out;
}

std::optional<std::filesystem::path> bundled_stopwords(std::string_view language) {
  auto path = std::filesystem::path(FSD_RESOURCE_DIR) / "stopwords" /
              (std::string(language) + ".txt");
  if (std::filesystem::exists(path)) return path;
  return std::nullopt;
}

RunConfig RunConfig::from_ini_string(std::string_view content) {
  pt::ptree tree;
  std::istringstream in{std::string(content)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  static const std::vector<std::pair<std::string, std::vector<std::string>>> kKnown = {
      {"corpus", {"path", "format", "annotated_only"}},
      {"tokenizer", {"strip_urls", "strip_mentions", "keep_hashtag_body", "lowercase"}},
      {"vectors", {"source", "df_min", "stopwords", "vocabulary", "counting_corpus",
                   "word_vectors", "external"}},
      {"fsd", {"threshold", "window", "batch_size"}},
      {"sweep", {"thresholds"}},
      {"classify", {"C", "seeds", "fraction"}},
      {"output", {"dir"}},
      {"runtime", {"threads"}},
  };
  for (const auto& [section, body] : tree) {
    auto known = std::find_if(kKnown.begin(), kKnown.end(),
                              [&](const auto& s) { return s.first == section; });
    if (known == kKnown.end()) throw ValidationError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (std::find(known->second.begin(), known->second.end(), key) == known->second.end()) {
        throw ValidationError("config: unknown key " + section + "." + key);
      }
    }
  }

  RunConfig c;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
      return std::string(trim(*v));
    }
    return std::nullopt;
  };

  if (auto v = get("corpus.path")) c.corpus_path = *v;
  if (auto v = get("corpus.format")) c.corpus_format = parse_corpus_format(*v);
  if (auto v = get("corpus.annotated_only")) c.annotated_only = parse_bool("corpus.annotated_only", *v);

  if (auto v = get("tokenizer.strip_urls")) c.tokenizer.strip_urls = parse_bool("tokenizer.strip_urls", *v);
  if (auto v = get("tokenizer.strip_mentions")) c.tokenizer.strip_mentions = parse_bool("tokenizer.strip_mentions", *v);
  if (auto v = get("tokenizer.keep_hashtag_body")) c.tokenizer.keep_hashtag_body = parse_bool("tokenizer.keep_hashtag_body", *v);
  if (auto v = get("tokenizer.lowercase")) c.tokenizer.lowercase = parse_bool("tokenizer.lowercase", *v);

  if (auto v = get("vectors.source")) c.source = parse_vector_source(*v);
  if (auto v = get("vectors.df_min")) c.df_min = parse_number<std::int64_t>("vectors.df_min", *v);
  if (auto v = get("vectors.stopwords")) c.stopwords = *v;
  if (auto v = get("vectors.vocabulary")) c.vocabulary_path = *v;
  if (auto v = get("vectors.counting_corpus")) c.counting_corpus_path = *v;
  if (auto v = get("vectors.word_vectors")) c.word_vectors_path = *v;
  if (auto v = get("vectors.external")) c.external_vectors_path = *v;

  if (auto v = get("fsd.threshold")) c.threshold = parse_number<double>("fsd.threshold", *v);
  if (auto v = get("fsd.window")) {
    c.window = *v == "auto" ? 0 : parse_number<std::size_t>("fsd.window", *v);
  }
  if (auto v = get("fsd.batch_size")) c.batch_size = parse_number<std::size_t>("fsd.batch_size", *v);

  if (auto v = get("sweep.thresholds")) {
    c.sweep_thresholds = *v == "default" ? std::vector<double>{} : parse_real_list(*v);
  }

  if (auto v = get("classify.C")) c.svm_c = parse_number<double>("classify.C", *v);
  if (auto v = get("classify.seeds")) c.seeds = parse_seed_list(*v);
  if (auto v = get("classify.fraction")) c.split_fraction = parse_number<double>("classify.fraction", *v);

  if (auto v = get("output.dir")) {
    c.output_dir = *v;
    c.output_dir_from_config = true;
  }
  if (auto v = get("runtime.threads")) c.threads = parse_number<std::size_t>("runtime.threads", *v);
  return c;
}

RunConfig RunConfig::from_ini(const std::filesystem::path& path) {
  RunConfig c = from_ini_string(read_file(path));
  // Relative paths inside a config file are relative to the file itself.
  const auto base = path.parent_path();
  for (auto* p : {&c.corpus_path, &c.vocabulary_path, &c.counting_corpus_path,
                  &c.word_vectors_path, &c.external_vectors_path}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  if (c.output_dir_from_config && c.output_dir.is_relative()) c.output_dir = base / c.output_dir;
  if (!c.stopwords.empty() && !bundled_stopwords(c.stopwords) &&
      std::filesystem::path(c.stopwords).is_relative()) {
    c.stopwords = (base / c.stopwords).string();
  }
  return c;
}

CorpusFormat RunConfig::resolved_corpus_format() const {
  return corpus_format ? *corpus_format : guess_corpus_format(corpus_path);
}

void RunConfig::validate(std::string_view command) const {
  if (corpus_path.empty()) throw ValidationError("no corpus given (--corpus or [corpus] path)");
  require_exists(corpus_path, "corpus");
  if (df_min < 1) throw ValidationError("df_min must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 2.0)) throw ValidationError("threshold must lie in [0, 2]");
  if (batch_size == 0) throw ValidationError("batch size must be >= 1");
  for (double t : sweep_thresholds) {
    if (!(t >= 0.0 && t <= 2.0)) throw ValidationError("sweep thresholds must lie in [0, 2]");
  }
  if (!(svm_c > 0.0)) throw ValidationError("C must be positive");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw ValidationError("split fraction must lie in (0, 1)");
  }
  if (seeds.empty()) throw ValidationError("at least one seed is required");

  if (!stopwords.empty() && !bundled_stopwords(stopwords)) require_exists(stopwords, "stopword list");
  if (!vocabulary_path.empty() && command != "build-vocab") {
    require_exists(vocabulary_path, "vocabulary");
  }
  if (!counting_corpus_path.empty()) require_exists(counting_corpus_path, "counting corpus");

  if (command == "evaluate" || command == "build-vocab") return;
  switch (source) {
    case VectorSourceKind::W2vMean:
    case VectorSourceKind::W2vIdfMean:
      if (word_vectors_path.empty()) throw ValidationError("w2v sources need [vectors] word_vectors");
      require_exists(word_vectors_path, "word vector file");
      break;
    case VectorSourceKind::External:
      if (external_vectors_path.empty()) {
        throw ValidationError("external source needs [vectors] external");
      }
      require_exists(external_vectors_path, "tweet vector file");
      break;
    default:
      break;
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["corpus"] = {{"path", corpus_path.string()},
                 {"format", std::string(to_string(resolved_corpus_format()))},
                 {"annotated_only", annotated_only}};
  j["tokenizer"] = {{"strip_urls", tokenizer.strip_urls},
                    {"strip_mentions", tokenizer.strip_mentions},
                    {"keep_hashtag_body", tokenizer.keep_hashtag_body},
                    {"lowercase", tokenizer.lowercase}};
  j["vectors"] = {{"source", std::string(to_string(source))},
                  {"df_min", df_min},
                  {"stopwords", stopwords},
                  {"vocabulary", vocabulary_path.string()},
                  {"counting_corpus", counting_corpus_path.string()},
                  {"word_vectors", word_vectors_path.string()},
                  {"external", external_vectors_path.string()}};
  j["fsd"] = {{"threshold", threshold}, {"window", window}, {"batch_size", batch_size}};
  j["sweep"] = {{"thresholds", sweep_thresholds}};
  j["classify"] = {{"C", svm_c}, {"seeds", seeds}, {"fraction", split_fraction}};
  j["output"] = {{"dir", output_dir.string()}};
  j["runtime"] = {{"threads", threads}};
  return j;
}

}  // namespace fsd
