#include <filesystem>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fsd/corpus.hpp"
#include "fsd/error.hpp"
#include "fsd/io.hpp"

namespace fsd {
namespace {

TEST(CorpusTest, JsonlIsSortedByTimestamp) {
  const char* text =
      R"({"id": "b", "timestamp": 1340000300, "text": "third"})" "\n"
      R"({"id": "a", "timestamp": 1340000100, "text": "first", "event_id": "e1"})" "\n"
      R"({"id": "c", "timestamp": 1340000200, "text": "second", "event_id": null})" "\n";
  Corpus c = parse_corpus(text, CorpusFormat::Jsonl);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].id, "a");
  EXPECT_EQ(c[1].id, "c");
  EXPECT_EQ(c[2].id, "b");
  EXPECT_EQ(c[0].event_id, std::optional<std::string>("e1"));
  EXPECT_FALSE(c[1].event_id.has_value());
  EXPECT_EQ(c.annotated_count(), 1u);
}

TEST(CorpusTest, TimestampTiesBrokenById) {
  const char* text =
      R"({"id": "z", "timestamp": 5, "text": "x"})" "\n"
      R"({"id": "m", "timestamp": 5, "text": "x"})" "\n"
      R"({"id": "a", "timestamp": 5, "text": "x"})" "\n";
  Corpus c = parse_corpus(text, CorpusFormat::Jsonl);
  EXPECT_EQ(c[0].id, "a");
  EXPECT_EQ(c[1].id, "m");
  EXPECT_EQ(c[2].id, "z");
}

TEST(CorpusTest, MissingTextNamesLine) {
  const char* text =
      R"({"id": "a", "timestamp": 1, "text": "ok"})" "\n"
      R"({"id": "b", "timestamp": 2})" "\n";
  try {
    parse_corpus(text, CorpusFormat::Jsonl);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("text"), std::string::npos) << e.what();
  }
}

TEST(CorpusTest, MalformedJsonNamesLine) {
  const char* text = R"({"id": "a", "timestamp": 1, "text": "ok"})" "\n"
                     "\n"
                     "{not json\n";
  try {
    parse_corpus(text, CorpusFormat::Jsonl);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(CorpusTest, DuplicateIdIsNamed) {
  const char* text = R"({"id": "dup", "timestamp": 1, "text": "a"})" "\n"
                     R"({"id": "dup", "timestamp": 2, "text": "b"})" "\n";
  try {
    parse_corpus(text, CorpusFormat::Jsonl);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
}

TEST(CorpusTest, EmptyFileRejected) {
  EXPECT_THROW(parse_corpus("", CorpusFormat::Jsonl), ValidationError);
  EXPECT_THROW(parse_corpus("\n\n", CorpusFormat::Jsonl), ValidationError);
  EXPECT_THROW(parse_corpus("id\ttimestamp\ttext\tevent_id\n", CorpusFormat::Tsv), ValidationError);
}

TEST(CorpusTest, NonPositiveTimestampRejected) {
  EXPECT_THROW(parse_corpus(R"({"id": "a", "timestamp": 0, "text": "x"})", CorpusFormat::Jsonl),
               ValidationError);
}

TEST(CorpusTest, TsvWithEmptyEventCell) {
  const char* text =
      "id\ttimestamp\ttext\tevent_id\n"
      "1\t100\thello world\te7\n"
      "2\t50\tno label\t\n"
      "3\t75\tshort row\n";
  Corpus c = parse_corpus(text, CorpusFormat::Tsv);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].id, "2");
  EXPECT_FALSE(c[0].event_id);
  EXPECT_EQ(c[2].event_id, std::optional<std::string>("e7"));
}

TEST(CorpusTest, TsvMissingTimestampCell) {
  const char* text = "id\ttimestamp\ttext\n1\n";
  EXPECT_THROW(parse_corpus(text, CorpusFormat::Tsv), ValidationError);
}

TEST(CorpusTest, MissingFileIsMissingResource) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", CorpusFormat::Jsonl), MissingResourceError);
}

Corpus random_corpus(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> ts(1, 50);
  std::uniform_int_distribution<int> coin(0, 3);
  const char* texts[] = {"plain", "tab\there", "new\nline", "quote \" and \\ slash", "é ü 日本"};
  std::vector<Tweet> tweets;
  for (std::size_t i = 0; i < n; ++i) {
    Tweet t{"id" + std::to_string(i), ts(rng), texts[i % 5], std::nullopt};
    if (coin(rng) != 0) t.event_id = "ev" + std::to_string(coin(rng));
    tweets.push_back(std::move(t));
  }
  return Corpus(std::move(tweets), "random");
}

TEST(CorpusProperty, IterationIsChronological) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c = random_corpus(rng, 40);
    for (std::size_t i = 1; i < c.size(); ++i) {
      ASSERT_LE(c[i - 1].timestamp, c[i].timestamp);
    }
  }
}

TEST(CorpusProperty, SerializeLoadIsIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Corpus c = random_corpus(rng, 30);
    for (auto format : {CorpusFormat::Jsonl, CorpusFormat::Tsv}) {
      Corpus back = parse_corpus(serialize_corpus(c, format), format);
      ASSERT_EQ(back.tweets(), c.tweets()) << to_string(format);
    }
  }
}

TEST(CorpusTest, SaveAndLoadFile) {
  auto dir = std::filesystem::temp_directory_path() / "fsd_corpus_test";
  std::filesystem::remove_all(dir);
  std::mt19937_64 rng(3);
  Corpus c = random_corpus(rng, 12);
  save_corpus(c, dir / "c.tsv", CorpusFormat::Tsv);
  EXPECT_EQ(load_corpus(dir / "c.tsv", CorpusFormat::Tsv).tweets(), c.tweets());
  EXPECT_FALSE(std::filesystem::exists(dir / "c.tsv.tmp"));
  std::filesystem::remove_all(dir);
}

TEST(SplitTest, SizesAndDisjointness) {
  std::vector<Tweet> tweets;
  for (int i = 0; i < 10; ++i) {
    tweets.push_back({"t" + std::to_string(i), 100 + i, "x", "e" + std::to_string(i % 2)});
  }
  tweets.push_back({"unlabeled", 200, "x", std::nullopt});
  Corpus c(std::move(tweets), "c");
  auto [train, test] = split_train_test(c, 0.5, 7);
  EXPECT_EQ(train.size(), 5u);
  EXPECT_EQ(test.size(), 5u);
  std::set<std::string> ids;
  for (const auto& t : train) ids.insert(t.id);
  for (const auto& t : test) EXPECT_TRUE(ids.insert(t.id).second) << t.id;
  EXPECT_FALSE(ids.contains("unlabeled"));

  auto [train2, test2] = split_train_test(c, 0.5, 7);
  EXPECT_EQ(train.tweets(), train2.tweets());
  EXPECT_EQ(test.tweets(), test2.tweets());
}

TEST(SplitTest, FractionOutOfRange) {
  Corpus c({{"a", 1, "x", "e"}}, "c");
  EXPECT_THROW(split_train_test(c, 0.0, 1), ValidationError);
  EXPECT_THROW(split_train_test(c, 1.0, 1), ValidationError);
  EXPECT_THROW(split_train_test(c, -0.2, 1), ValidationError);
}

TEST(SplitProperty, UnionIsAnnotatedSubset) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> frac(0.01, 0.99);
  for (int trial = 0; trial < 50; ++trial) {
    Corpus c = random_corpus(rng, 1 + trial * 3);
    if (c.annotated_count() == 0) continue;
    const double f = frac(rng);
    auto [train, test] = split_train_test(c, f, rng());
    std::multiset<std::string> got;
    for (const auto& t : train) got.insert(t.id);
    for (const auto& t : test) got.insert(t.id);
    std::multiset<std::string> want;
    for (const auto& t : c) {
      if (t.annotated()) want.insert(t.id);
    }
    ASSERT_EQ(got, want);
    ASSERT_EQ(train.size(), static_cast<std::size_t>(std::llround(f * static_cast<double>(want.size()))));
  }
}

}  // namespace
}  // namespace fsd
