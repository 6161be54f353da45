#include "fsd/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fsd/error.hpp"
#include "fsd/io.hpp"
#include "fsd/random.hpp"

namespace fsd {

namespace {

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::int64_t parse_timestamp(std::string_view text, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(line_error(line, "invalid timestamp '" + std::string(text) + "'"));
  }
  return value;
}

Tweet parse_json_record(std::string_view raw, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(line_error(line, std::string("malformed JSON: ") + e.what()));
  }
  if (!obj.is_object()) throw ValidationError(line_error(line, "record is not an object"));

  auto require = [&](const char* key) -> const nlohmann::json& {
    auto it = obj.find(key);
    if (it == obj.end()) {
      throw ValidationError(line_error(line, std::string("missing field \"") + key + "\""));
    }
    return *it;
  };

  Tweet t;
  const auto& id = require("id");
  if (id.is_string()) {
    t.id = id.get<std::string>();
  } else if (id.is_number_integer()) {
    t.id = std::to_string(id.get<std::int64_t>());
  } else {
    throw ValidationError(line_error(line, "\"id\" must be a string"));
  }

  const auto& ts = require("timestamp");
  if (ts.is_number_integer()) {
    t.timestamp = ts.get<std::int64_t>();
  } else if (ts.is_string()) {
    t.timestamp = parse_timestamp(ts.get<std::string>(), line);
  } else {
    throw ValidationError(line_error(line, "\"timestamp\" must be an integer"));
  }

  const auto& text = require("text");
  if (!text.is_string()) throw ValidationError(line_error(line, "\"text\" must be a string"));
  t.text = text.get<std::string>();

  if (auto it = obj.find("event_id"); it != obj.end() && !it->is_null()) {
    if (it->is_string()) {
      t.event_id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      t.event_id = std::to_string(it->get<std::int64_t>());
    } else {
      throw ValidationError(line_error(line, "\"event_id\" must be a string or null"));
    }
  }
  return t;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// TSV cells cannot hold tabs or newlines; these escapes keep arbitrary text
// round-trippable.
std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tsv_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[++i];
      switch (n) {
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case '\\': out += '\\'; break;
        default: out += '\\'; out += n;
      }
    } else {
      out += s[i];
    }
  }
  return out;
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
    ++line_no;
    fn(line, line_no);
    start = end + 1;
  }
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl" || name == "json") return CorpusFormat::Jsonl;
  if (name == "tsv") return CorpusFormat::Tsv;
  throw ValidationError("unknown corpus format '" + std::string(name) + "'");
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::Jsonl ? "jsonl" : "tsv";
}

CorpusFormat guess_corpus_format(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? CorpusFormat::Tsv : CorpusFormat::Jsonl;
}

Corpus::Corpus(std::vector<Tweet> tweets, std::string name, std::string language)
    : tweets_(std::move(tweets)), name_(std::move(name)), language_(std::move(language)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(tweets_.size());
  for (const auto& t : tweets_) {
    if (t.id.empty()) throw ValidationError("tweet with empty id");
    if (t.timestamp <= 0) {
      throw ValidationError("tweet " + t.id + ": timestamp must be positive");
    }
    if (!seen.insert(t.id).second) throw ValidationError("duplicate tweet id: " + t.id);
  }
  // Intra-second order is unspecified by the data; id order makes runs reproducible.
  std::sort(tweets_.begin(), tweets_.end(), [](const Tweet& a, const Tweet& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
  });
}

std::size_t Corpus::annotated_count() const {
  return static_cast<std::size_t>(
      std::count_if(tweets_.begin(), tweets_.end(), [](const Tweet& t) { return t.annotated(); }));
}

Corpus Corpus::annotated_subset() const {
  std::vector<Tweet> subset;
  subset.reserve(annotated_count());
  for (const auto& t : tweets_) {
    if (t.annotated()) subset.push_back(t);
  }
  return Corpus(std::move(subset), name_, language_);
}

std::int64_t Corpus::first_timestamp() const {
  if (tweets_.empty()) throw ValidationError("empty corpus");
  return tweets_.front().timestamp;
}

std::int64_t Corpus::last_timestamp() const {
  if (tweets_.empty()) throw ValidationError("empty corpus");
  return tweets_.back().timestamp;
}

Corpus parse_corpus(std::string_view content, CorpusFormat format, std::string name) {
  std::vector<Tweet> tweets;
  std::unordered_set<std::string> ids;

  auto add = [&](Tweet t, std::size_t line) {
    if (t.id.empty()) throw ValidationError(line_error(line, "empty id"));
    if (t.timestamp <= 0) throw ValidationError(line_error(line, "timestamp must be positive"));
    if (!ids.insert(t.id).second) throw ValidationError("duplicate tweet id: " + t.id);
    tweets.push_back(std::move(t));
  };

  if (format == CorpusFormat::Jsonl) {
    for_each_line(content, [&](std::string_view line, std::size_t no) {
      if (is_blank(line)) return;
      add(parse_json_record(line, no), no);
    });
  } else {
    bool header_seen = false;
    std::vector<std::size_t> column(4, SIZE_MAX);  // id, timestamp, text, event_id
    for_each_line(content, [&](std::string_view line, std::size_t no) {
      if (!header_seen) {
        if (is_blank(line)) return;
        auto cells = split_tabs(line);
        const char* names[] = {"id", "timestamp", "text", "event_id"};
        for (std::size_t c = 0; c < cells.size(); ++c) {
          for (std::size_t k = 0; k < 4; ++k) {
            if (cells[c] == names[k]) column[k] = c;
          }
        }
        for (std::size_t k = 0; k < 3; ++k) {
          if (column[k] == SIZE_MAX) {
            throw ValidationError(line_error(no, std::string("header lacks column \"") +
                                                     names[k] + "\""));
          }
        }
        header_seen = true;
        return;
      }
      if (line.empty()) return;
      auto cells = split_tabs(line);
      auto cell = [&](std::size_t k, const char* name) -> std::string_view {
        if (column[k] == SIZE_MAX) return {};
        if (column[k] >= cells.size()) {
          if (k == 3) return {};
          throw ValidationError(line_error(no, std::string("missing field \"") + name + "\""));
        }
        return cells[column[k]];
      };
      Tweet t;
      t.id = tsv_unescape(cell(0, "id"));
      t.timestamp = parse_timestamp(cell(1, "timestamp"), no);
      t.text = tsv_unescape(cell(2, "text"));
      if (auto ev = cell(3, "event_id"); !ev.empty()) t.event_id = tsv_unescape(ev);
      add(std::move(t), no);
    });
  }

  if (tweets.empty()) throw ValidationError("corpus contains no records");
  return Corpus(std::move(tweets), std::move(name));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::string content = read_file(path);
  try {
    return parse_corpus(content, format, path.stem().string());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::Jsonl) {
    for (const auto& t : corpus) {
      nlohmann::json obj = {{"id", t.id}, {"timestamp", t.timestamp}, {"text", t.text}};
      obj["event_id"] = t.event_id ? nlohmann::json(*t.event_id) : nlohmann::json(nullptr);
      out += obj.dump();
      out += '\n';
    }
  } else {
    out += "id\ttimestamp\ttext\tevent_id\n";
    for (const auto& t : corpus) {
      out += tsv_escape(t.id);
      out += '\t';
      out += std::to_string(t.timestamp);
      out += '\t';
      out += tsv_escape(t.text);
      out += '\t';
      if (t.event_id) out += tsv_escape(*t.event_id);
      out += '\n';
    }
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  write_file_atomic(path, serialize_corpus(corpus, format));
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, double fraction,
                                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ValidationError("split fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> annotated;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].annotated()) annotated.push_back(i);
  }
  if (annotated.empty()) throw ValidationError("corpus has no annotated tweets to split");

  std::mt19937_64 rng(seed);
  stable_shuffle(std::span<std::size_t>(annotated), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(annotated.size())));

  std::vector<bool> in_train(corpus.size(), false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[annotated[k]] = true;

  std::vector<Tweet> train, test;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].annotated()) continue;
    (in_train[i] ? train : test).push_back(corpus[i]);
  }
  return {Corpus(std::move(train), corpus.name() + ":train", corpus.language()),
          Corpus(std::move(test), corpus.name() + ":test", corpus.language())};
}

}  // namespace fsd
