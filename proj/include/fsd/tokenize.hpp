#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fsd {

using TokenList = std::vector<std::string>;

struct TokenizerConfig {
  bool strip_urls = true;
  bool strip_mentions = true;
  bool keep_hashtag_body = true;
  bool lowercase = true;

  friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

// Splits UTF-8 text into word tokens: runs of letters and digits, everything
// else (punctuation, apostrophes, symbols, emoji) separates. Invalid UTF-8
// bytes are treated as separators.
TokenList tokenize(std::string_view text, const TokenizerConfig& config = {});

namespace unicode {

bool is_word_char(char32_t cp);
char32_t to_lower(char32_t cp);

}  // namespace unicode

}  // namespace fsd
