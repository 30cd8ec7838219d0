#include "craic/textprep.hpp"

#include "craic/error.hpp"
#include "craic/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace craic {

namespace {

enum class CharClass { Lower, Upper, Digit, Underscore, Other };

CharClass classify(unsigned char c, const SubtokenOptions& o) {
  if (c >= 'a' && c <= 'z') return CharClass::Lower;
  if (c >= 'A' && c <= 'Z') return CharClass::Upper;
  if (c >= '0' && c <= '9') return CharClass::Digit;
  if (c == '_' && o.splitUnderscores) return CharClass::Underscore;
  return CharClass::Other;
}

bool isLetter(CharClass k) { return k == CharClass::Lower || k == CharClass::Upper; }

char asciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowerCopy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), asciiLower);
  return out;
}

bool isBlank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f'; }

std::string collapseWhitespace(std::string_view s) {
  std::string out;
  bool pendingSpace = false;
  for (char c : s) {
    if (isBlank(c)) {
      pendingSpace = !out.empty();
      continue;
    }
    if (pendingSpace) out += ' ';
    pendingSpace = false;
    out += c;
  }
  return out;
}

std::string_view trimLeft(std::string_view s) {
  while (!s.empty() && isBlank(s.front())) s.remove_prefix(1);
  return s;
}

bool isAsciiAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

/// `@word` at the start of `s`, or empty.
std::string_view leadingTag(std::string_view s) {
  if (s.size() < 2 || s[0] != '@' || !isAsciiAlpha(s[1])) return {};
  std::size_t n = 1;
  while (n < s.size() && isAsciiAlpha(s[n])) ++n;
  return s.substr(0, n);
}

constexpr std::array<std::string_view, 4> kAbbreviations{"e.g.", "i.e.", "etc.", "vs."};

bool endsWithAbbreviation(std::string_view text, std::size_t periodPos) {
  std::size_t b = periodPos;
  while (b > 0 && !isBlank(text[b - 1]) && text[b - 1] != '(' && text[b - 1] != '[') --b;
  const std::string word = lowerCopy(text.substr(b, periodPos - b + 1));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

void splitFreeText(std::string_view text, std::vector<SentenceSpan>& out) {
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string s = collapseWhitespace(text.substr(start, end - start));
    if (!s.empty()) out.push_back({std::move(s), std::nullopt});
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    std::size_t end = i + 1;
    while (end < text.size() && std::string_view(".?!\"')]").find(text[end]) != std::string_view::npos) {
      ++end;
    }
    if (c == '.' && end == i + 1 && endsWithAbbreviation(text, i)) continue;
    bool boundary = false;
    if (end == text.size()) {
      boundary = true;
    } else if (isBlank(text[end])) {
      std::size_t k = end;
      while (k < text.size() && text[k] != '\n' && isBlank(text[k])) ++k;
      if (k == text.size() || text[k] == '\n') {
        boundary = true;
      } else {
        boundary = text[k] >= 'A' && text[k] <= 'Z';
      }
    }
    if (boundary) {
      flush(end);
      i = end - 1;
    }
  }
  flush(text.size());
}

bool isWordByte(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

/// Length of an HTML tag like `<p>`, `</b>` or `<br/>` at the start of s, 0 if none.
std::size_t htmlTagLength(std::string_view s) {
  std::size_t i = 1;
  if (i < s.size() && s[i] == '/') ++i;
  if (i >= s.size() || !isAsciiAlpha(s[i])) return 0;
  while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
  while (i < s.size() && s[i] == ' ') ++i;
  if (i < s.size() && s[i] == '/') ++i;
  if (i < s.size() && s[i] == '>') return i + 1;
  return 0;
}

}  // namespace

std::vector<std::string> subtokenize(std::string_view token, const SubtokenOptions& options) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) parts.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < token.size(); ++i) {
    const auto c = static_cast<unsigned char>(token[i]);
    const CharClass k = classify(c, options);
    if (k == CharClass::Underscore) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const CharClass prev = classify(static_cast<unsigned char>(token[i - 1]), options);
      const CharClass next = i + 1 < token.size()
                                 ? classify(static_cast<unsigned char>(token[i + 1]), options)
                                 : CharClass::Other;
      bool split = false;
      if (prev == CharClass::Lower && k == CharClass::Upper) split = true;
      if (prev == CharClass::Upper && k == CharClass::Upper && next == CharClass::Lower) split = true;
      if (options.splitDigits && ((isLetter(prev) && k == CharClass::Digit) ||
                                  (prev == CharClass::Digit && isLetter(k)))) {
        split = true;
      }
      if (split) flush();
    }
    current += asciiLower(static_cast<char>(c));
  }
  flush();
  return parts;
}

std::vector<SentenceSpan> segmentSentences(const RawComment& comment) {
  std::string freeText;
  std::vector<SentenceSpan> tagged;
  std::string_view text = comment.text;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    const std::string_view body = trimLeft(line);
    if (auto tag = leadingTag(body); !tag.empty()) {
      tagged.push_back({std::string(body), std::string(tag)});
    } else if (!tagged.empty()) {
      tagged.back().text += ' ';
      tagged.back().text += line;
    } else {
      freeText += line;
      freeText += '\n';
    }
    pos = nl + 1;
  }
  std::vector<SentenceSpan> out;
  splitFreeText(freeText, out);
  for (auto& t : tagged) {
    t.text = collapseWhitespace(t.text);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> tokenizeComment(std::string_view text, const SubtokenOptions& options) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (isBlank(static_cast<char>(c))) {
      ++i;
      continue;
    }
    if (c == '@' && (i == 0 || isBlank(text[i - 1]) || text[i - 1] == '{' || text[i - 1] == '(')) {
      if (auto tag = leadingTag(text.substr(i)); !tag.empty()) {
        out.push_back(lowerCopy(tag));
        i += tag.size();
        continue;
      }
    }
    if (c == '<') {
      if (std::size_t n = htmlTagLength(text.substr(i)); n > 0) {
        out.push_back(lowerCopy(text.substr(i, n)));
        i += n;
        continue;
      }
    }
    if (isWordByte(c)) {
      std::size_t end = i;
      while (end < text.size() && isWordByte(static_cast<unsigned char>(text[end]))) ++end;
      for (auto& part : subtokenize(text.substr(i, end - i), options)) out.push_back(std::move(part));
      i = end;
      continue;
    }
    out.emplace_back(1, static_cast<char>(c));
    ++i;
  }
  return out;
}

std::vector<std::string> inlineTags(std::string_view text) {
  std::vector<std::string> tags;
  for (auto at = text.find("{@"); at != std::string_view::npos; at = text.find("{@", at + 2)) {
    if (auto tag = leadingTag(text.substr(at + 1)); !tag.empty()) tags.emplace_back(tag);
  }
  return tags;
}

std::vector<std::string> codeSubtokens(const std::vector<SourceToken>& tokens,
                                       const SubtokenOptions& options) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    switch (t.kind) {
      case TokenKind::Whitespace:
      case TokenKind::Comment:
        break;
      case TokenKind::Identifier:
      case TokenKind::Keyword:
        for (auto& part : subtokenize(t.text, options)) out.push_back(std::move(part));
        break;
      case TokenKind::Literal:
        out.push_back(lowerCopy(collapseWhitespace(t.text)));
        break;
      case TokenKind::Operator:
      case TokenKind::Punctuation:
        out.push_back(t.text);
        break;
    }
  }
  return out;
}

std::string methodKey(const RawMethod& method) {
  return method.fileId + ":" + std::to_string(method.startLine);
}

std::vector<MethodCommentPair> buildPairs(const MethodFullCommentPair& pair,
                                          const SubtokenOptions& options) {
  std::vector<MethodCommentPair> out;
  const auto sentences = segmentSentences(pair.comment);
  if (sentences.empty()) return out;
  auto methodTokens = codeSubtokens(pair.method.signatureTokens, options);
  auto body = codeSubtokens(pair.method.bodyTokens, options);
  methodTokens.insert(methodTokens.end(), body.begin(), body.end());
  const std::string key = methodKey(pair.method);
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    auto tokens = tokenizeComment(sentences[k].text, options);
    if (tokens.empty()) continue;
    MethodCommentPair mcp;
    mcp.pairId = key + ":" + std::to_string(k);
    mcp.file = pair.method.fileId;
    mcp.line = pair.method.startLine;
    mcp.methodTokens = methodTokens;
    mcp.sentence.tokens = std::move(tokens);
    mcp.sentence.javadocTag = sentences[k].javadocTag;
    mcp.sentence.sourcePairId = key;
    mcp.sentence.text = sentences[k].text;
    out.push_back(std::move(mcp));
  }
  return out;
}

CorpusSplit splitCorpus(std::size_t population, std::size_t trainN, std::size_t validN,
                        std::size_t testN, std::uint64_t seed) {
  const std::size_t total = trainN + validN + testN;
  if (total > population) {
    throw Error(ErrorCode::InsufficientPairs,
                "requested " + std::to_string(total) + " pairs but corpus has " +
                    std::to_string(population));
  }
  std::vector<std::size_t> idx(population);
  for (std::size_t i = 0; i < population; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < total; ++i) {
    std::swap(idx[i], idx[i + rng.below(population - i)]);
  }
  CorpusSplit split;
  split.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(trainN));
  split.valid.assign(idx.begin() + static_cast<std::ptrdiff_t>(trainN),
                     idx.begin() + static_cast<std::ptrdiff_t>(trainN + validN));
  split.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(trainN + validN),
                    idx.begin() + static_cast<std::ptrdiff_t>(total));
  return split;
}

}  // namespace craic
