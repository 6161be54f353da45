#include <random>

#include <gtest/gtest.h>

#include "fsd/tokenize.hpp"

namespace fsd {
namespace {

TEST(TokenizeTest, DefaultsStripUrlsMentionsAndHash) {
  EXPECT_EQ(tokenize("Check https://t.co/x #Breaking @user News"),
            (TokenList{"check", "breaking", "news"}));
}

TEST(TokenizeTest, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(TokenizeTest, ApostropheSplits) {
  EXPECT_EQ(tokenize("L'affaire Benalla!!!"), (TokenList{"l", "affaire", "benalla"}));
}

// Tokenized by hand from the default rules: URLs and @handles dropped, '#'
// removed, lowercase, letters/digits form tokens, everything else separates.
struct HandCase {
  const char* text;
  TokenList tokens;
};

const HandCase kHandCases[] = {
    {"Incendie à Notre-Dame de Paris, les pompiers sur place https://t.co/abc",
     {"incendie", "à", "notre", "dame", "de", "paris", "les", "pompiers", "sur", "place"}},
    {"RT @BFMTV: Emmanuel Macron s'exprime ce soir à 20h",
     {"rt", "emmanuel", "macron", "s", "exprime", "ce", "soir", "à", "20h"}},
    {"#GiletsJaunes acte XII : mobilisation en baisse",
     {"giletsjaunes", "acte", "xii", "mobilisation", "en", "baisse"}},
    {"Les Bleus champions du monde !!! 🇫🇷🏆", {"les", "bleus", "champions", "du", "monde"}},
    {"Grève SNCF : trafic très perturbé mardi", {"grève", "sncf", "trafic", "très", "perturbé", "mardi"}},
    {"L'été sera chaud... ÉNORME canicule prévue", {"l", "été", "sera", "chaud", "énorme", "canicule", "prévue"}},
    {"@user1 @user2 d'accord avec vous", {"d", "accord", "avec", "vous"}},
    {"Élection européenne : résultats à 20h00 www.lemonde.fr",
     {"élection", "européenne", "résultats", "à", "20h00"}},
    {"Œuvre volée au Louvre — l'enquête continue", {"œuvre", "volée", "au", "louvre", "l", "enquête", "continue"}},
    {"Coupe du monde 2018: la France bat la Croatie 4-2",
     {"coupe", "du", "monde", "2018", "la", "france", "bat", "la", "croatie", "4", "2"}},
    {"BREAKING: Earthquake hits Mexico City http://bit.ly/2xyz",
     {"breaking", "earthquake", "hits", "mexico", "city"}},
    {"Can't believe the #Olympics opening ceremony tonight!",
     {"can", "t", "believe", "the", "olympics", "opening", "ceremony", "tonight"}},
    {"@BBCNews reports 3 dead in London attack", {"reports", "3", "dead", "in", "london", "attack"}},
    {"Whitney Houston dies at 48 :( #RIP", {"whitney", "houston", "dies", "at", "48", "rip"}},
    {"U.S. election: Obama wins re-election", {"u", "s", "election", "obama", "wins", "re", "election"}},
    {"Apple unveils iPhone5 — pre-orders start Friday",
     {"apple", "unveils", "iphone5", "pre", "orders", "start", "friday"}},
    {"Hurricane Sandy: NYC subway flooded!!! https://t.co/q1 #sandy",
     {"hurricane", "sandy", "nyc", "subway", "flooded", "sandy"}},
    {"email me at test@example.com", {"email", "me", "at", "test", "example", "com"}},
    {"Euro 2012 final: Spain 4–0 Italy 😮😮", {"euro", "2012", "final", "spain", "4", "0", "italy"}},
    {"   \t\n", {}},
};

TEST(TokenizeTest, HandTokenizedTweets) {
  for (const auto& c : kHandCases) {
    EXPECT_EQ(tokenize(c.text), c.tokens) << c.text;
  }
}

TEST(TokenizeTest, FlagsCanBeDisabled) {
  TokenizerConfig keep;
  keep.strip_urls = false;
  keep.strip_mentions = false;
  keep.lowercase = false;
  EXPECT_EQ(tokenize("See https://t.co/x @Bob", keep),
            (TokenList{"See", "https", "t", "co", "x", "Bob"}));

  TokenizerConfig drop_tags;
  drop_tags.keep_hashtag_body = false;
  EXPECT_EQ(tokenize("#Breaking news #2019 now", drop_tags), (TokenList{"news", "now"}));
}

TEST(TokenizeTest, MidWordMarkersAreSeparators) {
  // '#' and '@' only start a tag/mention at a word boundary.
  EXPECT_EQ(tokenize("c#sharp a@b"), (TokenList{"c", "sharp", "a", "b"}));
}

TEST(TokenizeTest, InvalidUtf8IsSeparator) {
  EXPECT_EQ(tokenize("abc\xff" "def"), (TokenList{"abc", "def"}));
  EXPECT_EQ(tokenize("x\xe2\x82"), (TokenList{"x"}));
}

TEST(TokenizeTest, UnicodeCaseFolding) {
  EXPECT_EQ(tokenize("ÀÉÎÕÜ ÇA ŒUVRE Ÿ ΑΘΗΝΑ МОСКВА"),
            (TokenList{"àéîõü", "ça", "œuvre", "ÿ", "αθηνα", "москва"}));
}

TEST(TokenizeProperty, IdempotentOnCleanText) {
  std::mt19937_64 rng(17);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 8), count(0, 12);
  for (int trial = 0; trial < 200; ++trial) {
    TokenList tokens;
    std::string joined;
    for (int k = count(rng); k > 0; --k) {
      std::string w;
      for (int i = len(rng); i > 0; --i) w += alphabet[letter(rng)];
      if (!joined.empty()) joined += ' ';
      joined += w;
      tokens.push_back(w);
    }
    ASSERT_EQ(tokenize(joined), tokens);
  }
}

TEST(TokenizeProperty, NoUrlOrMentionSurvives) {
  std::mt19937_64 rng(23);
  const char* pieces[] = {"hello", "@alice", "https://t.co/Zz9", "http://a.b/c?d=e", "www.site.org",
                          "#tag", "world!", "@bob_2", "x@y"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (int k = 0; k < 6; ++k) {
      text += pieces[pick(rng)];
      text += ' ';
    }
    for (const auto& tok : tokenize(text)) {
      ASSERT_NE(tok, "https");
      ASSERT_NE(tok, "http");
      ASSERT_NE(tok, "www");
      ASSERT_NE(tok, "alice");
      ASSERT_NE(tok, "bob_2");
      ASSERT_NE(tok, "bob");
      ASSERT_EQ(tok.find_first_of(" \t\n@#"), std::string::npos);
    }
  }
}

}  // namespace
}  // namespace fsd
