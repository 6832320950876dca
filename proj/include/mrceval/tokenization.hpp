#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mrceval {

enum class TokenizerMode { whitespace_punct, character };

struct TokenizerConfig {
  TokenizerMode mode = TokenizerMode::whitespace_punct;
  bool lowercase = false;

  friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

/// Ordered tokens of one piece of text. Tokens are never empty.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_text;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i]; }
  auto begin() const { return tokens.begin(); }
  auto end() const { return tokens.end(); }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/// Splits `text` into tokens.
///
/// whitespace_punct: runs of non-space characters separated by Unicode
/// white space; every code point in general category P* or S* becomes a
/// token of its own. character: one token per non-space code point.
/// With `lowercase`, code points are case folded (simple, locale-free
/// folding) before splitting.
///
/// Throws std::invalid_argument if `text` is not well-formed UTF-8.
TokenSequence tokenize(std::string_view text, const TokenizerConfig& config = {});

std::string_view to_string(TokenizerMode mode);
TokenizerMode tokenizer_mode_from_string(std::string_view name);

}  // namespace mrceval
