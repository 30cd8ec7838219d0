#include "craic/extract.hpp"

#include "craic/statistics.hpp"
#include "craic/textprep.hpp"

#include <algorithm>
#include <array>

namespace craic {

namespace {

constexpr std::array<std::string_view, 17> kStatementKeywords{
    "return", "throw",  "new",   "if",     "else",  "for",   "while",    "do",   "switch",
    "case",   "try",    "catch", "finally", "assert", "break", "continue", "goto",
};

bool isStatementKeyword(const SourceToken& t) {
  return t.kind == TokenKind::Keyword &&
         std::find(kStatementKeywords.begin(), kStatementKeywords.end(), t.text) !=
             kStatementKeywords.end();
}

using TokenRef = const SourceToken*;

/// Index of the `close` matching the `open` at `from`, or npos.
std::size_t matchForward(const std::vector<TokenRef>& toks, std::size_t from,
                         std::string_view open, std::string_view close) {
  int depth = 0;
  for (std::size_t i = from; i < toks.size(); ++i) {
    if (toks[i]->isPunct(open)) ++depth;
    if (toks[i]->isPunct(close) && --depth == 0) return i;
  }
  return std::string::npos;
}

struct Scope {
  std::string className;  // empty for the file scope
};

struct HeaderMatch {
  std::size_t nameIndex = 0;
  std::size_t openParen = 0;
  std::size_t closeParen = 0;
};

// Skips `@Name(.Name)*` and an optional argument list; returns the index
// after the annotation or `i` unchanged if there is none.
std::size_t skipAnnotation(const std::vector<TokenRef>& h, std::size_t i, std::size_t end) {
  if (i + 1 >= end || !h[i]->isPunct("@") || h[i + 1]->kind != TokenKind::Identifier) return i;
  std::size_t j = i + 2;
  while (j + 1 < end && h[j]->isPunct(".") && h[j + 1]->kind == TokenKind::Identifier) j += 2;
  if (j < end && h[j]->isPunct("(")) {
    int depth = 0;
    for (; j < end; ++j) {
      if (h[j]->isPunct("(")) ++depth;
      if (h[j]->isPunct(")") && --depth == 0) return j + 1;
    }
    return end;
  }
  return j;
}

std::optional<HeaderMatch> matchMethodHeader(const std::vector<TokenRef>& h, const Scope& scope) {
  if (h.empty()) return std::nullopt;
  int depth = 0;
  std::size_t end = h.size();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& t = *h[i];
    if (t.isPunct("(")) ++depth;
    if (t.isPunct(")")) --depth;
    if (depth == 0) {
      if (t.kind == TokenKind::Operator && (t.text == "=" || t.text == "->")) return std::nullopt;
      if (t.is(TokenKind::Keyword, "throws") && end == h.size()) end = i;
    }
    if (isStatementKeyword(t)) return std::nullopt;
  }
  if (end < 3 || !h[end - 1]->isPunct(")")) return std::nullopt;
  std::size_t open = end - 1;
  depth = 0;
  for (std::size_t i = end; i-- > 0;) {
    if (h[i]->isPunct(")")) ++depth;
    if (h[i]->isPunct("(") && --depth == 0) {
      open = i;
      break;
    }
  }
  if (depth != 0 || open == 0) return std::nullopt;
  const std::size_t name = open - 1;
  if (h[name]->kind != TokenKind::Identifier) return std::nullopt;

  // Everything before the name must be annotations or a plain type/modifier
  // run without parentheses.
  std::size_t plain = 0;
  for (std::size_t i = 0; i < name;) {
    const std::size_t next = skipAnnotation(h, i, name);
    if (next != i) {
      i = next;
      continue;
    }
    if (h[i]->isPunct("(") || h[i]->isPunct(")") || h[i]->isPunct("@")) return std::nullopt;
    ++plain;
    ++i;
  }
  if (plain == 0 && h[name]->text != scope.className) return std::nullopt;
  return HeaderMatch{name, open, end - 1};
}

std::vector<std::string> formalNames(const std::vector<TokenRef>& h, const HeaderMatch& m) {
  std::vector<std::string> names;
  int depth = 0;
  int angle = 0;
  for (std::size_t i = m.openParen + 1; i <= m.closeParen; ++i) {
    const auto& t = *h[i];
    if (t.isPunct("(")) ++depth;
    if (t.kind == TokenKind::Operator) {
      if (t.text == "<") ++angle;
      if (t.text == ">") angle = std::max(0, angle - 1);
      if (t.text == ">>") angle = std::max(0, angle - 2);
      if (t.text == ">>>") angle = std::max(0, angle - 3);
    }
    const bool atEnd = (i == m.closeParen) || (depth == 0 && angle == 0 && t.isPunct(","));
    if (atEnd) {
      std::size_t j = i;
      while (j > m.openParen + 1 && (h[j - 1]->isPunct("]") || h[j - 1]->isPunct("["))) --j;
      if (j > m.openParen + 1 && h[j - 1]->kind == TokenKind::Identifier) {
        // A lone identifier is a type without a name only in malformed code;
        // require at least a type token before the name.
        if (j - 1 > m.openParen + 1 && !h[j - 2]->isPunct(",")) names.push_back(h[j - 1]->text);
      }
    }
    if (t.isPunct(")")) --depth;
  }
  return names;
}

bool isTypeDeclarationHeader(const std::vector<TokenRef>& h, std::string& name) {
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const auto& t = *h[i];
    const bool typeKeyword =
        t.kind == TokenKind::Keyword && (t.text == "class" || t.text == "interface" || t.text == "enum");
    const bool recordKeyword = t.is(TokenKind::Identifier, "record") &&
                               h[i + 1]->kind == TokenKind::Identifier;
    if ((typeKeyword || recordKeyword) && !(i > 0 && h[i - 1]->isPunct("."))) {
      if (h[i + 1]->kind == TokenKind::Identifier) name = h[i + 1]->text;
      return true;
    }
  }
  return false;
}

std::string trimCopy(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\f");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\f");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

RawComment parseBlockComment(std::string_view tok, int startLine) {
  RawComment out;
  out.startLine = startLine;
  out.isJavadocStyle = tok.size() >= 5 && tok.substr(0, 3) == "/**";
  std::string_view inner = tok;
  if (inner.substr(0, 2) == "/*") inner.remove_prefix(2);
  if (out.isJavadocStyle && !inner.empty() && inner.front() == '*') inner.remove_prefix(1);
  if (inner.size() >= 2 && inner.substr(inner.size() - 2) == "*/") inner.remove_suffix(2);

  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    auto nl = inner.find('\n', pos);
    if (nl == std::string_view::npos) nl = inner.size();
    std::string line = trimCopy(inner.substr(pos, nl - pos));
    std::size_t stars = 0;
    while (stars < line.size() && line[stars] == '*') ++stars;
    line = trimCopy(std::string_view(line).substr(stars));
    for (auto at = line.find("/*"); at != std::string::npos; at = line.find("/*")) {
      line.replace(at, 2, " ");
    }
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.text += '\n';
    out.text += lines[i];
  }
  return out;
}

MinedFile mineFile(const std::vector<SourceToken>& tokens, const std::string& fileId) {
  MinedFile out;
  std::vector<TokenRef> sig;
  std::vector<std::size_t> rawIndex;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].isTrivia()) {
      sig.push_back(&tokens[i]);
      rawIndex.push_back(i);
    }
  }

  std::vector<Scope> scopes{Scope{}};
  std::size_t headerStart = 0;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    const auto& t = *sig[j];
    if (t.isPunct(";")) {
      headerStart = j + 1;
      continue;
    }
    if (t.isPunct("}")) {
      if (scopes.size() > 1) {
        scopes.pop_back();
      } else {
        out.diagnostics.push_back({ErrorCode::BraceImbalance, t.line, t.column, "unmatched '}'"});
      }
      headerStart = j + 1;
      continue;
    }
    if (!t.isPunct("{")) continue;

    std::vector<TokenRef> header(sig.begin() + static_cast<std::ptrdiff_t>(headerStart),
                                 sig.begin() + static_cast<std::ptrdiff_t>(j));
    std::string typeName;
    if (isTypeDeclarationHeader(header, typeName)) {
      scopes.push_back(Scope{typeName});
      headerStart = j + 1;
      continue;
    }

    const std::size_t close = matchForward(sig, j, "{", "}");
    if (close == std::string::npos) {
      out.diagnostics.push_back({ErrorCode::BraceImbalance, t.line, t.column,
                                 "block opened here is never closed; rest of file skipped"});
      break;
    }

    if (auto m = matchMethodHeader(header, scopes.back())) {
      RawMethod method;
      method.name = header[m->nameIndex]->text;
      method.fileId = fileId;
      method.startLine = header.front()->line;
      method.formals = formalNames(header, *m);
      for (auto* h : header) method.signatureTokens.push_back(*h);
      for (std::size_t k = j; k <= close; ++k) method.bodyTokens.push_back(*sig[k]);
      out.declaredMethods.push_back(method.name);

      // Walk back from the first header token over whitespace only.
      std::size_t r = rawIndex[headerStart];
      while (r > 0 && tokens[r - 1].kind == TokenKind::Whitespace) --r;
      if (r > 0) {
        const auto& c = tokens[r - 1];
        if (c.kind == TokenKind::Comment && c.text.rfind("/*", 0) == 0) {
          out.pairs.push_back({std::move(method), parseBlockComment(c.text, c.line)});
        }
      }
    }
    j = close;
    headerStart = close + 1;
  }
  return out;
}

std::vector<MethodFullCommentPair> minePairs(const std::vector<SourceToken>& tokens,
                                             const std::string& fileId) {
  return mineFile(tokens, fileId).pairs;
}

Quartiles quartilesOf(std::vector<double> values) {
  Quartiles q;
  q.mean = stats::mean(values);
  q.median = stats::median(values);
  q.q1 = stats::nearestRank(values, 0.25);
  q.q3 = stats::nearestRank(values, 0.75);
  return q;
}

LengthStats corpusStats(const std::vector<MethodFullCommentPair>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyCorpus, "no method-comment pairs");
  std::vector<double> methodLengths;
  std::vector<double> commentLengths;
  for (const auto& p : pairs) {
    methodLengths.push_back(
        static_cast<double>(p.method.signatureTokens.size() + p.method.bodyTokens.size()));
    commentLengths.push_back(static_cast<double>(tokenizeComment(p.comment.text).size()));
  }
  LengthStats s;
  s.pairCount = pairs.size();
  s.methodTokens = quartilesOf(std::move(methodLengths));
  s.commentTokens = quartilesOf(std::move(commentLengths));
  return s;
}

}  // namespace craic
