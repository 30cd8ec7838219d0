#pragma once

#include "craic/extract.hpp"
#include "craic/textprep.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace craic {

enum class CompressionScheme { Signature, BeginEnd, Identifier };

std::string_view schemeName(CompressionScheme scheme);
/// Accepts "signature", "begin-end" and "identifier".
CompressionScheme parseScheme(std::string_view name);

inline constexpr std::size_t kDefaultMaxTokens = 50;

struct CompressedMethod {
  std::vector<std::string> tokens;
  CompressionScheme scheme = CompressionScheme::Signature;
  bool truncated = false;
};

/// Subtokenized signature, cut to the first `maxTokens` tokens.
CompressedMethod compressSignature(const RawMethod& method, std::size_t maxTokens,
                                   const SubtokenOptions& options = {});

/// Identity when the method fits; otherwise the first ceil(L/2) tokens
/// followed by the last floor(L/2).
CompressedMethod compressBeginEnd(const std::vector<std::string>& methodTokens, std::size_t maxTokens);

enum class IdentifierCategory { Brace, Local, Global, UserType, ExternalMethod, LocalMethod, Formal };

std::string_view categoryName(IdentifierCategory category);

struct ClassifiedToken {
  std::size_t bodyIndex = 0;  // position in RawMethod::bodyTokens
  std::string name;
  IdentifierCategory category = IdentifierCategory::Global;
};

/// Resolution-free classification of every brace and identifier occurrence
/// in the body. `fileMethods` holds the names of methods declared in the
/// same file and separates local from external calls.
///
///  - call (`name(`)            -> local/external method; `new Name(` -> user type
///  - capitalized type position -> user type (after `new`, before a declared
///                                 name, inside a cast), except boxed primitives
///  - parameter name            -> formal
///  - first seen as declaration -> local
///  - anything else             -> global
std::vector<ClassifiedToken> classifyIdentifiers(const RawMethod& method,
                                                 const std::set<std::string>& fileMethods);

/// Signature first, then salient body names chosen greedily by category
/// precedence (braces > locals > globals > user types > external methods >
/// local methods > formals), each distinct name once. The method's outer
/// braces are always candidates; inner braces only when they enclose a
/// chosen name. Chosen body items are emitted in source order.
CompressedMethod compressIdentifier(const RawMethod& method, const std::set<std::string>& fileMethods,
                                    std::size_t maxTokens, const SubtokenOptions& options = {});

std::vector<std::string> truncateComment(const std::vector<std::string>& sentenceTokens,
                                         std::size_t maxTokens);

/// Dispatches to the scheme; begin-end operates on the full method subtokens.
CompressedMethod compressMethod(const RawMethod& method, const std::set<std::string>& fileMethods,
                                CompressionScheme scheme, std::size_t maxTokens,
                                const SubtokenOptions& options = {});

}  // namespace craic
