#pragma once

#include "craic/error.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace craic {

enum class TokenKind : std::uint8_t {
  Identifier,
  Keyword,
  Literal,
  Operator,
  Punctuation,
  Comment,
  Whitespace,
};

std::string_view tokenKindName(TokenKind kind);

struct SourceToken {
  std::string text;
  TokenKind kind = TokenKind::Whitespace;
  int line = 1;    // 1-based
  int column = 1;  // 1-based, in bytes

  bool isTrivia() const noexcept {
    return kind == TokenKind::Whitespace || kind == TokenKind::Comment;
  }
  bool is(TokenKind k, std::string_view t) const noexcept { return kind == k && text == t; }
  bool isPunct(std::string_view t) const noexcept { return kind == TokenKind::Punctuation && text == t; }

  friend bool operator==(const SourceToken&, const SourceToken&) = default;
};

struct LexDiagnostic {
  ErrorCode code;
  int line;
  int column;
  std::string message;
};

struct LexResult {
  std::vector<SourceToken> tokens;
  std::vector<LexDiagnostic> diagnostics;
};

/// Token-level Java lexer. Never throws on malformed input: unterminated
/// literals and comments are cut at the end of their line, reported, and
/// lexing resumes on the next line. Concatenating every token's text gives
/// back the input unchanged.
LexResult lexJava(std::string_view source);

bool isJavaKeyword(std::string_view word);

/// Classifies a single token string the way lexJava would. Used to recover
/// kinds for tokens that were persisted as plain strings.
TokenKind classifyTokenText(std::string_view text);

}  // namespace craic
