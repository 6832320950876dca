#include "mrceval/tokenization.hpp"

#include <stdexcept>
#include <string>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace mrceval {
namespace {

bool is_punct_or_symbol(UChar32 c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

TokenSequence tokenize(std::string_view text, const TokenizerConfig& config) {
  TokenSequence seq;
  seq.source_text = std::string(text);

  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  std::string current;

  auto flush = [&] {
    if (!current.empty()) {
      seq.tokens.push_back(std::move(current));
      current.clear();
    }
  };

  for (int32_t i = 0; i < length;) {
    const int32_t offset = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw std::invalid_argument("tokenize: ill-formed UTF-8 at byte " +
                                  std::to_string(offset));
    }
    if (u_isUWhiteSpace(c)) {
      flush();
      continue;
    }
    if (config.lowercase) c = u_foldCase(c, U_FOLD_CASE_DEFAULT);

    if (config.mode == TokenizerMode::character || is_punct_or_symbol(c)) {
      flush();
      append_utf8(current, c);
      flush();
    } else {
      append_utf8(current, c);
    }
  }
  flush();
  return seq;
}

std::string_view to_string(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::whitespace_punct: return "whitespace";
    case TokenizerMode::character: return "char";
  }
  return "whitespace";
}

TokenizerMode tokenizer_mode_from_string(std::string_view name) {
  if (name == "whitespace") return TokenizerMode::whitespace_punct;
  if (name == "char") return TokenizerMode::character;
  throw std::invalid_argument("unknown tokenizer mode: " + std::string(name));
}

}  // namespace mrceval
