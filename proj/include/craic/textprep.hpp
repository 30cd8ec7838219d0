#pragma once

#include "craic/extract.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace craic {

struct SubtokenOptions {
  bool splitUnderscores = true;
  bool splitDigits = true;
};

/// Splits an identifier at camelCase, acronym (`HTTPServer`), underscore and
/// letter/digit boundaries and lower-cases the parts.
std::vector<std::string> subtokenize(std::string_view token, const SubtokenOptions& options = {});

struct SentenceSpan {
  std::string text;
  std::optional<std::string> javadocTag;

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

/// Javadoc-aware sentence segmentation.
///
/// A line whose first non-blank character starts `@tag` opens a tagged
/// sentence that runs until the next such line or the end of the comment.
/// Free text is split after `.`, `?` or `!` when the next character is a
/// line end, the end of text, or whitespace followed by an upper-case
/// letter. `e.g.`, `i.e.`, `etc.` and `vs.` never end a sentence.
std::vector<SentenceSpan> segmentSentences(const RawComment& comment);

/// Rule-based comment tokenizer: whitespace and punctuation split, punctuation
/// kept as tokens, `@tag` and simple HTML tags kept whole, words subtokenized.
std::vector<std::string> tokenizeComment(std::string_view text, const SubtokenOptions& options = {});

/// Names of `{@tag ...}` inline constructs in a sentence, in order.
std::vector<std::string> inlineTags(std::string_view text);

/// Subtokenized, lower-cased code tokens. Literals stay whole (lower-cased,
/// internal whitespace collapsed to single spaces).
std::vector<std::string> codeSubtokens(const std::vector<SourceToken>& tokens,
                                       const SubtokenOptions& options = {});

struct CommentSentence {
  std::vector<std::string> tokens;
  std::optional<std::string> javadocTag;
  std::string sourcePairId;
  std::string text;
};

struct MethodCommentPair {
  std::string pairId;  // "<file>:<method line>:<sentence index>"
  std::string file;
  int line = 1;
  std::vector<std::string> methodTokens;
  CommentSentence sentence;
};

std::string methodKey(const RawMethod& method);

/// One pair per segmented sentence that tokenizes to at least one token.
std::vector<MethodCommentPair> buildPairs(const MethodFullCommentPair& pair,
                                          const SubtokenOptions& options = {});

struct CorpusSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

/// Uniform draw without replacement of trainN + validN + testN distinct
/// indices from [0, population). Reproducible for a fixed seed on every
/// platform. Returned indices keep draw order.
CorpusSplit splitCorpus(std::size_t population, std::size_t trainN, std::size_t validN,
                        std::size_t testN, std::uint64_t seed);

}  // namespace craic
