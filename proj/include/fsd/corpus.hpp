#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fsd {

struct Tweet {
  std::string id;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  std::string text;
  std::optional<std::string> event_id;

  bool annotated() const { return event_id.has_value(); }
  friend bool operator==(const Tweet&, const Tweet&) = default;
};

enum class CorpusFormat { Jsonl, Tsv };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);
// Picks the format from the extension (.tsv -> Tsv, anything else -> Jsonl).
CorpusFormat guess_corpus_format(const std::filesystem::path& path);

/// Chronologically ordered, immutable collection of tweets.
///
/// Ordering is (timestamp, id) ascending; ids are unique. Unannotated tweets
/// are kept because idf statistics over the full stream need them.
class Corpus {
 public:
  Corpus() = default;
  /// Validates, sorts and takes ownership. Throws ValidationError on
  /// duplicate/empty ids or non-positive timestamps.
  Corpus(std::vector<Tweet> tweets, std::string name, std::string language = "");

  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::span<const Tweet> view() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }
  const Tweet& operator[](std::size_t i) const { return tweets_[i]; }
  auto begin() const { return tweets_.begin(); }
  auto end() const { return tweets_.end(); }

  const std::string& name() const { return name_; }
  const std::string& language() const { return language_; }

  std::size_t annotated_count() const;
  /// Only the tweets that carry a gold event label, in stream order.
  Corpus annotated_subset() const;

  std::int64_t first_timestamp() const;
  std::int64_t last_timestamp() const;

 private:
  std::vector<Tweet> tweets_;
  std::string name_;
  std::string language_;
};

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus parse_corpus(std::string_view content, CorpusFormat format,
                    std::string name = "");

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format);

/// Random split of the annotated subset. Train receives round(fraction * n)
/// tweets; both halves stay in stream order.
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, double fraction,
                                           std::uint64_t seed);

}  // namespace fsd
