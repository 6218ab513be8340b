#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace transduce {

/// Atomic symbol of a word. Compared by exact, case-sensitive equality.
using Token = std::string;

/// Ordered sequence of tokens; its size is the length L used by the rules.
using TokenSeq = std::vector<Token>;

struct ExamplePair {
  TokenSeq input;
  TokenSeq output;

  friend bool operator==(const ExamplePair&, const ExamplePair&) = default;
};

enum class TokenizerKind { Symbols, Chars, Delimited };

struct TokenizerMode {
  TokenizerKind kind = TokenizerKind::Symbols;
  std::string separator;  // only meaningful for Delimited

  static TokenizerMode symbols() { return {TokenizerKind::Symbols, {}}; }
  static TokenizerMode chars() { return {TokenizerKind::Chars, {}}; }
  static TokenizerMode delimited(std::string sep) {
    return {TokenizerKind::Delimited, std::move(sep)};
  }

  friend bool operator==(const TokenizerMode&, const TokenizerMode&) = default;
};

namespace detail {

// Length in bytes of the UTF-8 sequence introduced by `lead`. Malformed
// lead bytes count as a single byte so that tokenization stays total.
inline std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

// Bytes >= 0x80 belong to words so that accented letters stay inside runs.
inline bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

inline bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace detail

/// Splits a raw string into tokens.
///
/// Symbols: whitespace separates, every punctuation character is a token of
/// its own, maximal alphanumeric runs are single tokens.
/// Chars: one token per UTF-8 code point.
/// Delimited: split on the separator; empty fields are dropped.
inline TokenSeq tokenize(std::string_view raw, const TokenizerMode& mode) {
  TokenSeq out;
  switch (mode.kind) {
    case TokenizerKind::Chars: {
      std::size_t i = 0;
      while (i < raw.size()) {
        std::size_t n = detail::utf8_length(static_cast<unsigned char>(raw[i]));
        if (i + n > raw.size()) n = raw.size() - i;
        out.emplace_back(raw.substr(i, n));
        i += n;
      }
      break;
    }
    case TokenizerKind::Symbols: {
      std::size_t i = 0;
      while (i < raw.size()) {
        auto c = static_cast<unsigned char>(raw[i]);
        if (detail::is_space_byte(c)) {
          ++i;
        } else if (detail::is_word_byte(c)) {
          std::size_t j = i;
          while (j < raw.size() && detail::is_word_byte(static_cast<unsigned char>(raw[j]))) ++j;
          out.emplace_back(raw.substr(i, j - i));
          i = j;
        } else {
          out.emplace_back(raw.substr(i, 1));
          ++i;
        }
      }
      break;
    }
    case TokenizerKind::Delimited: {
      if (mode.separator.empty()) {
        if (!raw.empty()) out.emplace_back(raw);
        break;
      }
      std::size_t start = 0;
      while (start <= raw.size()) {
        auto pos = raw.find(mode.separator, start);
        auto end = pos == std::string_view::npos ? raw.size() : pos;
        if (end > start) out.emplace_back(raw.substr(start, end - start));
        if (pos == std::string_view::npos) break;
        start = pos + mode.separator.size();
      }
      break;
    }
  }
  return out;
}

inline std::string join(const TokenSeq& seq, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += sep;
    out += seq[i];
  }
  return out;
}

inline std::string detokenize(const TokenSeq& seq, const TokenizerMode& mode) {
  switch (mode.kind) {
    case TokenizerKind::Chars: return join(seq, "");
    case TokenizerKind::Symbols: return join(seq, " ");
    case TokenizerKind::Delimited: return join(seq, mode.separator);
  }
  return {};
}

/// Whitespace-separated token list, the notation used by example files.
inline TokenSeq split_words(std::string_view line) {
  TokenSeq out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && detail::is_space_byte(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !detail::is_space_byte(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace transduce
