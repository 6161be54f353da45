#include "fsd/tokenize.hpp"

#include <array>

namespace fsd {

namespace unicode {

namespace {

struct Range {
  char32_t lo, hi;
};

// Non-ASCII code point ranges that separate words: punctuation, symbols,
// spaces, format controls, emoji. Everything else above 0x7F counts as a
// letter or digit.
constexpr std::array kSeparatorRanges = {
    Range{0x0080, 0x00A9}, Range{0x00AB, 0x00B1}, Range{0x00B4, 0x00B4},
    Range{0x00B6, 0x00B8}, Range{0x00BB, 0x00BB}, Range{0x00BF, 0x00BF},
    Range{0x00D7, 0x00D7}, Range{0x00F7, 0x00F7},
    Range{0x02C2, 0x02C5}, Range{0x02D2, 0x02DF},
    Range{0x037E, 0x037E}, Range{0x0387, 0x0387},
    Range{0x055A, 0x055F}, Range{0x0589, 0x058A},
    Range{0x05BE, 0x05BE}, Range{0x05C0, 0x05C0}, Range{0x05C3, 0x05C3},
    Range{0x05F3, 0x05F4},
    Range{0x0600, 0x060F}, Range{0x061B, 0x061F}, Range{0x066A, 0x066D},
    Range{0x06D4, 0x06D4},
    Range{0x0964, 0x0965}, Range{0x0E3F, 0x0E3F}, Range{0x0E4F, 0x0E4F},
    Range{0x0E5A, 0x0E5B},
    Range{0x1680, 0x1680}, Range{0x180E, 0x180E},
    Range{0x2000, 0x206F},  // general punctuation, spaces, zero-width joiners
    Range{0x20A0, 0x20CF},  // currency
    Range{0x20D0, 0x20FF},  // combining marks for symbols
    Range{0x2100, 0x2101}, Range{0x2103, 0x2106}, Range{0x2108, 0x2109},
    Range{0x2114, 0x2114}, Range{0x2116, 0x2118}, Range{0x211E, 0x2123},
    Range{0x2125, 0x2125}, Range{0x2127, 0x2127}, Range{0x2129, 0x2129},
    Range{0x212E, 0x212E}, Range{0x213A, 0x213B}, Range{0x2140, 0x2144},
    Range{0x214A, 0x214D}, Range{0x214F, 0x214F},
    Range{0x2190, 0x2BFF},  // arrows, math operators, technical, box drawing, dingbats
    Range{0x2E00, 0x2E7F},  // supplemental punctuation
    Range{0x3000, 0x3004}, Range{0x3008, 0x3020}, Range{0x3030, 0x3030},
    Range{0x303D, 0x303F}, Range{0x30FB, 0x30FB},
    Range{0xD800, 0xDFFF},  // surrogates (invalid in UTF-8)
    Range{0xE000, 0xF8FF},  // private use
    Range{0xFD3E, 0xFD3F}, Range{0xFE00, 0xFE6F},
    Range{0xFEFF, 0xFEFF},
    Range{0xFF01, 0xFF0F}, Range{0xFF1A, 0xFF20}, Range{0xFF3B, 0xFF40},
    Range{0xFF5B, 0xFF65}, Range{0xFFE0, 0xFFFF},
    Range{0x1F000, 0x1FBFF},  // mahjong, cards, emoji, pictographs
    Range{0xE0000, 0xE007F},  // tags
    Range{0xF0000, 0x10FFFF},
};

bool in_ranges(char32_t cp) {
  for (const auto& r : kSeparatorRanges) {
    if (cp < r.lo) return false;
    if (cp <= r.hi) return true;
  }
  return false;
}

}  // namespace

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  return !in_ranges(cp);
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
  // Latin-1: À..Þ except ×
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  // Latin Extended-A: alternating upper/lower pairs
  if (cp == 0x130) return 'i';
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  // Greek
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp == 0x386) return 0x3AC;
  if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
  // Cyrillic
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if ((cp >= 0x460 && cp <= 0x481) || (cp >= 0x48A && cp <= 0x4BF)) return cp | 1;
  if (cp == 0x4C0) return 0x4CF;
  if (cp >= 0x4C1 && cp <= 0x4CE) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x4D0 && cp <= 0x4FF) return cp | 1;
  // Latin Extended Additional (Vietnamese etc.)
  if (cp >= 0x1E00 && cp <= 0x1EFF && !(cp >= 0x1E96 && cp <= 0x1E9F)) return cp | 1;
  // Fullwidth Latin
  if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 0x20;
  return cp;
}

}  // namespace unicode

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one UTF-8 sequence starting at text[i]; advances i. Malformed bytes
// decode to kInvalid and consume a single byte.
char32_t next_code_point(std::string_view text, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(text[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  std::size_t len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + len > text.size()) {
    ++i;
    return kInvalid;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF) {
    ++i;
    return kInvalid;
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool starts_with_nocase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
    if (c != prefix[i]) return false;
  }
  return true;
}

bool looks_like_url(std::string_view chunk) {
  return starts_with_nocase(chunk, "http://") || starts_with_nocase(chunk, "https://") ||
         starts_with_nocase(chunk, "www.");
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

TokenList tokenize(std::string_view text, const TokenizerConfig& config) {
  TokenList tokens;
  std::string current;

  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      flush();
      ++i;
      continue;
    }
    // URLs are whole whitespace-delimited chunks.
    const bool chunk_start = current.empty() && (i == 0 || is_space(text[i - 1]));
    if (config.strip_urls && chunk_start) {
      std::size_t end = i;
      while (end < text.size() && !is_space(text[end])) ++end;
      if (looks_like_url(text.substr(i, end - i))) {
        i = end;
        continue;
      }
    }
    // A marker only starts a mention/hashtag at a word boundary.
    if ((text[i] == '@' || text[i] == '#') && current.empty()) {
      const bool mention = text[i] == '@';
      if ((mention && config.strip_mentions) || (!mention && !config.keep_hashtag_body)) {
        std::size_t end = i + 1;
        if (mention) {
          while (end < text.size() && is_handle_char(text[end])) ++end;
        } else {
          while (end < text.size()) {
            std::size_t probe = end;
            char32_t cp = next_code_point(text, probe);
            if (cp == kInvalid || !(unicode::is_word_char(cp) || cp == '_')) break;
            end = probe;
          }
        }
        if (end > i + 1) {
          i = end;
          continue;
        }
      }
    }
    char32_t cp = next_code_point(text, i);
    if (cp != kInvalid && unicode::is_word_char(cp)) {
      append_utf8(current, config.lowercase ? unicode::to_lower(cp) : cp);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace fsd
