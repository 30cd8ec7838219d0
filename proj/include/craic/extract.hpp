#pragma once

#include "craic/java_lexer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace craic {

/// A method as it appears in source, with trivia (whitespace and comments)
/// removed. The signature runs from the first annotation or modifier through
/// the parameter list and any throws clause; the body runs from `{` through
/// its matching `}`.
struct RawMethod {
  std::vector<SourceToken> signatureTokens;
  std::vector<SourceToken> bodyTokens;
  std::string name;
  std::string fileId;
  int startLine = 1;
  /// Names declared in the parameter list, in order.
  std::vector<std::string> formals;
};

struct RawComment {
  std::string text;  // delimiters and `*` gutters removed, lines joined by '\n'
  int startLine = 1;
  bool isJavadocStyle = false;
};

struct MethodFullCommentPair {
  RawMethod method;
  RawComment comment;
};

struct MinedFile {
  /// Only methods with an immediately preceding block comment, in file order.
  std::vector<MethodFullCommentPair> pairs;
  /// Every method found in the file, commented or not.
  std::vector<std::string> declaredMethods;
  std::vector<LexDiagnostic> diagnostics;
};

/// Finds method declarations at class-body (or file) level by signature
/// pattern and brace matching. Methods of classes nested inside a method
/// body belong to that body and are not reported separately.
MinedFile mineFile(const std::vector<SourceToken>& tokens, const std::string& fileId);

std::vector<MethodFullCommentPair> minePairs(const std::vector<SourceToken>& tokens,
                                             const std::string& fileId = "");

/// Builds a RawComment from the text of a block comment token.
RawComment parseBlockComment(std::string_view commentToken, int startLine);

struct Quartiles {
  double mean = 0;
  double median = 0;
  double q1 = 0;
  double q3 = 0;
};

struct LengthStats {
  std::size_t pairCount = 0;
  Quartiles methodTokens;
  Quartiles commentTokens;
};

Quartiles quartilesOf(std::vector<double> values);

/// Method length counts signature plus body tokens; comment length counts
/// tokenizeComment() output over the full comment.
LengthStats corpusStats(const std::vector<MethodFullCommentPair>& pairs);

}  // namespace craic
