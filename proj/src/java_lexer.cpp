#include "craic/java_lexer.hpp"

#include <algorithm>
#include <array>

namespace craic {

namespace {

constexpr std::array<std::string_view, 50> kKeywords{
    "abstract", "assert",     "boolean",   "break",     "byte",      "case",
    "catch",    "char",       "class",     "const",     "continue",  "default",
    "do",       "double",     "else",      "enum",      "extends",   "final",
    "finally",  "float",      "for",       "goto",      "if",        "implements",
    "import",   "instanceof", "int",       "interface", "long",      "native",
    "new",      "package",    "private",   "protected", "public",    "return",
    "short",    "static",     "strictfp",  "super",     "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",       "void",
    "volatile", "while",
};

// Longest first so that a linear scan finds the maximal munch.
constexpr std::array<std::string_view, 41> kOperators{
    ">>>=", "<<=", ">>=", ">>>", "->", "::", "++", "--", "&&", "||", "==",
    "!=",   "<=",  ">=",  "+=",  "-=", "*=", "/=", "&=", "|=", "^=", "%=",
    "<<",   ">>",  "=",   ">",   "<",  "!",  "~",  "?",  ":",  "+",  "-",
    "*",    "/",   "&",   "|",   "^",  "%",  "#",  "\\",
};

bool isIdentStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool isIdentPart(unsigned char c) { return isIdentStart(c) || (c >= '0' && c <= '9'); }

bool isDigit(unsigned char c) { return c >= '0' && c <= '9'; }

bool isSpace(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    while (pos_ < src_.size()) lexOne();
    return std::move(result_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  std::size_t lineEnd(std::size_t from) const {
    const auto nl = src_.find('\n', from);
    return nl == std::string_view::npos ? src_.size() : nl;
  }

  void emit(TokenKind kind, std::size_t end) {
    SourceToken tok{std::string(src_.substr(pos_, end - pos_)), kind, line_, column_};
    for (char c : tok.text) {
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
    pos_ = end;
    result_.tokens.push_back(std::move(tok));
  }

  void report(ErrorCode code, std::string message) {
    result_.diagnostics.push_back({code, line_, column_, std::move(message)});
  }

  void lexOne() {
    const auto c = static_cast<unsigned char>(peek());
    if (isSpace(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && isSpace(static_cast<unsigned char>(src_[end]))) ++end;
      emit(TokenKind::Whitespace, end);
    } else if (c == '/' && peek(1) == '/') {
      emit(TokenKind::Comment, lineEnd(pos_));
    } else if (c == '/' && peek(1) == '*') {
      lexBlockComment();
    } else if (c == '"') {
      lexString();
    } else if (c == '\'') {
      lexQuoted('\'');
    } else if (isDigit(c) || (c == '.' && isDigit(static_cast<unsigned char>(peek(1))))) {
      lexNumber();
    } else if (isIdentStart(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && isIdentPart(static_cast<unsigned char>(src_[end]))) ++end;
      const auto word = src_.substr(pos_, end - pos_);
      TokenKind kind = TokenKind::Identifier;
      if (word == "true" || word == "false" || word == "null") {
        kind = TokenKind::Literal;
      } else if (isJavaKeyword(word)) {
        kind = TokenKind::Keyword;
      }
      emit(kind, end);
    } else if (src_.substr(pos_, 3) == "...") {
      emit(TokenKind::Punctuation, pos_ + 3);
    } else if (std::string_view("(){}[];,.@").find(static_cast<char>(c)) != std::string_view::npos) {
      emit(TokenKind::Punctuation, pos_ + 1);
    } else {
      for (auto op : kOperators) {
        if (src_.substr(pos_, op.size()) == op) {
          emit(TokenKind::Operator, pos_ + op.size());
          return;
        }
      }
      // Stray byte (backtick, control character, ...): keep it, one byte.
      emit(TokenKind::Punctuation, pos_ + 1);
    }
  }

  void lexBlockComment() {
    const auto close = src_.find("*/", pos_ + 2);
    if (close == std::string_view::npos) {
      report(ErrorCode::UnterminatedComment, "unterminated block comment");
      emit(TokenKind::Comment, lineEnd(pos_));
      return;
    }
    emit(TokenKind::Comment, close + 2);
  }

  void lexString() {
    if (src_.substr(pos_, 3) == "\"\"\"") {
      // Text block: runs to the next unescaped triple quote.
      std::size_t i = pos_ + 3;
      while (i < src_.size()) {
        if (src_[i] == '\\') {
          i += 2;
        } else if (src_.substr(i, 3) == "\"\"\"") {
          emit(TokenKind::Literal, i + 3);
          return;
        } else {
          ++i;
        }
      }
      report(ErrorCode::UnterminatedLiteral, "unterminated text block");
      emit(TokenKind::Literal, lineEnd(pos_));
      return;
    }
    lexQuoted('"');
  }

  void lexQuoted(char quote) {
    std::size_t i = pos_ + 1;
    while (i < src_.size() && src_[i] != '\n') {
      if (src_[i] == '\\') {
        if (i + 1 < src_.size() && src_[i + 1] == '\n') break;
        i += 2;
        continue;
      }
      if (src_[i] == quote) {
        emit(TokenKind::Literal, i + 1);
        return;
      }
      ++i;
    }
    report(ErrorCode::UnterminatedLiteral,
           quote == '"' ? "unterminated string literal" : "unterminated character literal");
    emit(TokenKind::Literal, lineEnd(pos_));
  }

  void lexNumber() {
    std::size_t i = pos_;
    const bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
    bool sawDot = false;
    while (i < src_.size()) {
      const auto ch = static_cast<unsigned char>(src_[i]);
      if (isIdentPart(ch) && ch < 0x80 && ch != '$') {
        ++i;
      } else if (ch == '.' && !sawDot && !hex && !(i + 1 < src_.size() && src_[i + 1] == '.')) {
        sawDot = true;
        ++i;
      } else if ((ch == '+' || ch == '-') && i > pos_) {
        const char prev = src_[i - 1];
        const bool exponent = hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E');
        if (!exponent) break;
        ++i;
      } else {
        break;
      }
    }
    emit(TokenKind::Literal, i);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  LexResult result_;
};

}  // namespace

std::string_view tokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Comment: return "comment";
    case TokenKind::Whitespace: return "whitespace";
  }
  return "unknown";
}

bool isJavaKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

LexResult lexJava(std::string_view source) { return Lexer(source).run(); }

TokenKind classifyTokenText(std::string_view text) {
  auto lexed = lexJava(text);
  if (lexed.tokens.size() == 1) return lexed.tokens.front().kind;
  return TokenKind::Literal;
}

}  // namespace craic
