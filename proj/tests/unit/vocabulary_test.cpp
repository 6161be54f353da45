#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "fsd/error.hpp"
#include "fsd/vocabulary.hpp"

namespace fsd {
namespace {

std::vector<TokenList> docs(std::initializer_list<TokenList> lists) { return lists; }

TEST(IdfTest, Examples) {
  EXPECT_NEAR(idf_weight(4, 9), 1.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(idf_weight(4, 9), 1.693147, 1e-6);
  EXPECT_NEAR(idf_weight(9, 99), 1.0 + std::log(10.0), 1e-12);
  EXPECT_NEAR(idf_weight(9, 99), 3.302585, 1e-6);
  EXPECT_EQ(idf_weight(7, 7), 1.0);
  EXPECT_EQ(idf_weight(1, 1), 1.0);
  EXPECT_THROW(idf_weight(0, 5), ValidationError);
  EXPECT_THROW(idf_weight(6, 5), ValidationError);
}

TEST(IdfProperty, StrictlyDecreasingInDf) {
  for (std::int64_t n : {1, 2, 10, 1000, 123457}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t df = 1; df <= std::min<std::int64_t>(n, 2000); ++df) {
      const double w = idf_weight(df, n);
      ASSERT_LT(w, prev);
      ASSERT_GE(w, 1.0);
      prev = w;
    }
  }
}

TEST(VocabularyTest, DfMinFilters) {
  auto d = docs({{"a", "b"}, {"a"}, {"a", "c"}});
  Vocabulary v = build_vocabulary(d, {}, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.entry(0).term, "a");
  EXPECT_EQ(v.entry(0).df, 3);
  EXPECT_EQ(v.entry(0).idf, 1.0);
  EXPECT_EQ(v.n_docs(), 3);
}

TEST(VocabularyTest, CountsPresenceNotOccurrences) {
  auto d = docs({{"a", "a", "a"}, {"b"}});
  Vocabulary v = build_vocabulary(d, {}, 1);
  EXPECT_EQ(v.entry(*v.find("a")).df, 1);
}

TEST(VocabularyTest, IndicesFollowLexicographicOrderAndStopwordsDropped) {
  auto d = docs({{"zeta", "alpha", "the"}, {"mu", "the"}});
  Vocabulary v = build_vocabulary(d, {"the"}, 1);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v.entry(0).term, "alpha");
  EXPECT_EQ(v.entry(1).term, "mu");
  EXPECT_EQ(v.entry(2).term, "zeta");
  EXPECT_FALSE(v.find("the").has_value());
}

TEST(VocabularyTest, InvalidArguments) {
  auto d = docs({{"a"}});
  EXPECT_THROW(build_vocabulary(d, {}, 0), ValidationError);
  std::vector<TokenList> none;
  EXPECT_THROW(build_vocabulary(none, {}, 1), ValidationError);
}

TEST(VocabularyTest, SerializationIsStableAndRoundTrips) {
  auto d = docs({{"b", "a"}, {"c", "a"}, {"a", "d"}});
  Vocabulary v1 = build_vocabulary(d, {"d", "x"}, 1, CountingMode::AllTweets);
  Vocabulary v2 = build_vocabulary(d, {"x", "d"}, 1, CountingMode::AllTweets);
  EXPECT_EQ(v1.serialize(), v2.serialize());
  Vocabulary back = Vocabulary::parse(v1.serialize());
  EXPECT_EQ(back.serialize(), v1.serialize());
  EXPECT_EQ(back.mode(), CountingMode::AllTweets);
  EXPECT_EQ(back.n_docs(), 3);
  ASSERT_EQ(back.size(), v1.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back.entry(i).term, v1.entry(i).term);
    EXPECT_EQ(back.entry(i).df, v1.entry(i).df);
    EXPECT_EQ(back.entry(i).idf, v1.entry(i).idf);
  }
  EXPECT_EQ(back.stopwords(), v1.stopwords());

  auto path = std::filesystem::path(FSD_TEST_TMP) / "vocab_roundtrip.tsv";
  v1.save(path);
  EXPECT_EQ(Vocabulary::load(path).serialize(), v1.serialize());
}

TEST(VocabularyTest, ParseRejectsGarbage) {
  EXPECT_THROW(Vocabulary::parse("not a vocabulary\n"), ValidationError);
  EXPECT_THROW(Vocabulary::load("/nonexistent/vocab.tsv"), MissingResourceError);
}

TEST(CountingModeTest, Names) {
  EXPECT_EQ(parse_counting_mode("dataset"), CountingMode::Dataset);
  EXPECT_EQ(parse_counting_mode("all_tweets"), CountingMode::AllTweets);
  EXPECT_EQ(parse_counting_mode("all-tweets"), CountingMode::AllTweets);
  EXPECT_THROW(parse_counting_mode("everything"), ValidationError);
}

TEST(StopwordsTest, CommentsAndBlankLines) {
  auto s = parse_stopwords("# header\nthe\n\n  a  \n#skip\nof\n");
  EXPECT_EQ(s, (StopwordSet{"the", "a", "of"}));
}

TEST(VectorizeIdfTest, RepetitionsCountOnce) {
  auto d = docs({{"a", "b"}, {"a", "b"}});
  Vocabulary v = build_vocabulary(d, {}, 1);
  TokenList tokens{"a", "a", "b"};
  SparseVector x = vectorize_idf(tokens, v);
  ASSERT_EQ(x.nnz(), 2u);
  EXPECT_NEAR(x.entries()[0].weight, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(x.entries()[1].weight, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(VectorizeIdfTest, WeightsProportionalToIdf) {
  auto d = docs({{"a", "b"}, {"a"}, {"a"}, {"a"}});
  Vocabulary v = build_vocabulary(d, {}, 1);
  TokenList tokens{"b", "a", "unknown"};
  SparseVector x = vectorize_idf(tokens, v);
  const double ia = idf_weight(4, 4), ib = idf_weight(1, 4);
  const double norm = std::hypot(ia, ib);
  ASSERT_EQ(x.nnz(), 2u);
  EXPECT_NEAR(x.entries()[0].weight, ia / norm, 1e-15);
  EXPECT_NEAR(x.entries()[1].weight, ib / norm, 1e-15);
  TokenList oov{"zzz"};
  EXPECT_TRUE(vectorize_idf(oov, v).empty());
}

TEST(VectorizeIdfProperty, InvariantUnderOrderAndRepetition) {
  std::mt19937_64 rng(11);
  std::vector<TokenList> corpus;
  for (int i = 0; i < 50; ++i) {
    TokenList t;
    for (int k = 0; k < 6; ++k) t.push_back("w" + std::to_string(rng() % 30));
    corpus.push_back(t);
  }
  Vocabulary v = build_vocabulary(corpus, {}, 2);
  for (const auto& t : corpus) {
    TokenList shuffled = t;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    TokenList doubled = t;
    doubled.insert(doubled.end(), t.begin(), t.end());
    const SparseVector x = vectorize_idf(t, v);
    ASSERT_EQ(vectorize_idf(shuffled, v), x);
    ASSERT_EQ(vectorize_idf(doubled, v), x);
  }
}

}  // namespace
}  // namespace fsd
