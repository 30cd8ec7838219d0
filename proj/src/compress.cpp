#include "craic/compress.hpp"

#include "craic/error.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace craic {

namespace {

void requireLimit(std::size_t maxTokens, std::size_t minimum) {
  if (maxTokens < minimum) {
    throw Error(ErrorCode::InvalidArgument,
                "max tokens must be at least " + std::to_string(minimum));
  }
}

constexpr std::array<std::string_view, 9> kBoxedPrimitives{
    "Integer", "Long", "Short", "Byte", "Character", "Boolean", "Float", "Double", "Void",
};

constexpr std::array<std::string_view, 8> kPrimitiveTypes{
    "int", "long", "short", "byte", "char", "boolean", "float", "double",
};

bool isCapitalized(const std::string& s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

bool isBoxed(const std::string& s) {
  return std::find(kBoxedPrimitives.begin(), kBoxedPrimitives.end(), s) != kBoxedPrimitives.end();
}

class BodyView {
 public:
  explicit BodyView(const std::vector<SourceToken>& t) : t_(t) {}

  const SourceToken* at(std::size_t i) const { return i < t_.size() ? &t_[i] : nullptr; }
  const SourceToken* before(std::size_t i) const { return i > 0 ? &t_[i - 1] : nullptr; }

  bool punct(std::size_t i, std::string_view p) const { return at(i) && at(i)->isPunct(p); }
  bool op(std::size_t i, std::string_view p) const {
    return at(i) && at(i)->kind == TokenKind::Operator && at(i)->text == p;
  }
  bool keyword(const SourceToken* t, std::string_view k) const {
    return t && t->is(TokenKind::Keyword, k);
  }

  bool isTypeEnd(const SourceToken* t) const {
    if (!t) return false;
    if (t->kind == TokenKind::Identifier) return true;
    if (t->kind == TokenKind::Keyword &&
        std::find(kPrimitiveTypes.begin(), kPrimitiveTypes.end(), t->text) != kPrimitiveTypes.end()) {
      return true;
    }
    return t->isPunct("]");
  }

  bool isClosingAngle(const SourceToken* t) const {
    return t && t->kind == TokenKind::Operator && (t->text == ">" || t->text == ">>" || t->text == ">>>");
  }

  /// `Type name` followed by `=`, `;`, `,`, `:` or `)`.
  bool isDeclaration(std::size_t i) const {
    const SourceToken* next = at(i + 1);
    if (!next) return false;
    const bool terminator = next->isPunct(";") || next->isPunct(",") || next->isPunct(")") ||
                            (next->kind == TokenKind::Operator && (next->text == "=" || next->text == ":"));
    if (!terminator) return false;
    const SourceToken* prev = before(i);
    if (isTypeEnd(prev)) return true;
    return isClosingAngle(prev) && !next->isPunct(")");
  }

  bool isTypePosition(std::size_t i) const {
    const SourceToken* prev = before(i);
    if (keyword(prev, "new") || keyword(prev, "instanceof")) return true;
    if (prev && prev->kind == TokenKind::Operator && prev->text == "<") return true;
    // Cast: `( Name )` followed by an operand.
    if (prev && prev->isPunct("(") && punct(i + 1, ")")) {
      const SourceToken* operand = at(i + 2);
      if (operand && (operand->kind == TokenKind::Identifier || operand->kind == TokenKind::Literal ||
                      operand->isPunct("(") || keyword(operand, "this") || keyword(operand, "new"))) {
        return true;
      }
    }
    // Declaration type: skip generic arguments and array brackets, then a declared name.
    std::size_t j = i + 1;
    if (op(j, "<")) {
      int depth = 0;
      for (; j < t_.size(); ++j) {
        const auto& tok = t_[j];
        if (tok.kind == TokenKind::Operator) {
          if (tok.text == "<") ++depth;
          if (tok.text == ">") depth -= 1;
          if (tok.text == ">>") depth -= 2;
          if (tok.text == ">>>") depth -= 3;
        } else if (tok.kind != TokenKind::Identifier && !tok.isPunct(",") && !tok.isPunct(".") &&
                   !tok.isPunct("[") && !tok.isPunct("]") && !tok.is(TokenKind::Operator, "?")) {
          return false;
        }
        if (depth <= 0) break;
      }
      ++j;
    }
    while (punct(j, "[") && punct(j + 1, "]")) j += 2;
    const SourceToken* name = at(j);
    return name && name->kind == TokenKind::Identifier && j > i && isDeclarationAfterType(j);
  }

 private:
  bool isDeclarationAfterType(std::size_t j) const {
    const SourceToken* next = at(j + 1);
    return next && (next->isPunct(";") || next->isPunct(",") || next->isPunct(")") ||
                    (next->kind == TokenKind::Operator && (next->text == "=" || next->text == ":")));
  }

  const std::vector<SourceToken>& t_;
};

std::vector<std::size_t> matchBraces(const std::vector<SourceToken>& body) {
  std::vector<std::size_t> match(body.size(), std::string::npos);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i].isPunct("{")) stack.push_back(i);
    if (body[i].isPunct("}") && !stack.empty()) {
      match[stack.back()] = i;
      match[i] = stack.back();
      stack.pop_back();
    }
  }
  return match;
}

}  // namespace

std::string_view schemeName(CompressionScheme scheme) {
  switch (scheme) {
    case CompressionScheme::Signature: return "signature";
    case CompressionScheme::BeginEnd: return "begin-end";
    case CompressionScheme::Identifier: return "identifier";
  }
  return "signature";
}

CompressionScheme parseScheme(std::string_view name) {
  if (name == "signature") return CompressionScheme::Signature;
  if (name == "begin-end" || name == "beginEnd") return CompressionScheme::BeginEnd;
  if (name == "identifier") return CompressionScheme::Identifier;
  throw Error(ErrorCode::ConfigInvalid, "unknown compression scheme '" + std::string(name) + "'");
}

std::string_view categoryName(IdentifierCategory category) {
  switch (category) {
    case IdentifierCategory::Brace: return "brace";
    case IdentifierCategory::Local: return "local";
    case IdentifierCategory::Global: return "global";
    case IdentifierCategory::UserType: return "userType";
    case IdentifierCategory::ExternalMethod: return "externalMethod";
    case IdentifierCategory::LocalMethod: return "localMethod";
    case IdentifierCategory::Formal: return "formal";
  }
  return "global";
}

CompressedMethod compressSignature(const RawMethod& method, std::size_t maxTokens,
                                   const SubtokenOptions& options) {
  requireLimit(maxTokens, 1);
  CompressedMethod out;
  out.scheme = CompressionScheme::Signature;
  out.tokens = codeSubtokens(method.signatureTokens, options);
  if (out.tokens.size() > maxTokens) {
    out.tokens.resize(maxTokens);
    out.truncated = true;
  }
  return out;
}

CompressedMethod compressBeginEnd(const std::vector<std::string>& methodTokens, std::size_t maxTokens) {
  requireLimit(maxTokens, 2);
  CompressedMethod out;
  out.scheme = CompressionScheme::BeginEnd;
  if (methodTokens.size() <= maxTokens) {
    out.tokens = methodTokens;
    return out;
  }
  const std::size_t head = (maxTokens + 1) / 2;
  const std::size_t tail = maxTokens / 2;
  out.tokens.assign(methodTokens.begin(), methodTokens.begin() + static_cast<std::ptrdiff_t>(head));
  out.tokens.insert(out.tokens.end(), methodTokens.end() - static_cast<std::ptrdiff_t>(tail),
                    methodTokens.end());
  out.truncated = true;
  return out;
}

std::vector<ClassifiedToken> classifyIdentifiers(const RawMethod& method,
                                                 const std::set<std::string>& fileMethods) {
  const auto& body = method.bodyTokens;
  const BodyView view(body);
  const std::set<std::string> formals(method.formals.begin(), method.formals.end());
  std::set<std::string> seen;
  std::set<std::string> locals;
  std::vector<ClassifiedToken> out;

  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto& tok = body[i];
    if (tok.isPunct("{") || tok.isPunct("}")) {
      out.push_back({i, tok.text, IdentifierCategory::Brace});
      continue;
    }
    if (tok.kind != TokenKind::Identifier) continue;

    const SourceToken* prev = view.before(i);
    const bool memberAccess = prev && prev->isPunct(".");
    IdentifierCategory category;
    if (view.punct(i + 1, "(")) {
      if (view.keyword(prev, "new")) {
        category = IdentifierCategory::UserType;
      } else {
        category = fileMethods.count(tok.text) ? IdentifierCategory::LocalMethod
                                               : IdentifierCategory::ExternalMethod;
      }
    } else if (memberAccess) {
      category = IdentifierCategory::Global;
    } else if (isCapitalized(tok.text) && !isBoxed(tok.text) && view.isTypePosition(i)) {
      category = IdentifierCategory::UserType;
    } else if (formals.count(tok.text)) {
      category = IdentifierCategory::Formal;
    } else if (locals.count(tok.text)) {
      category = IdentifierCategory::Local;
    } else if (!seen.count(tok.text) && view.isDeclaration(i)) {
      locals.insert(tok.text);
      category = IdentifierCategory::Local;
    } else {
      category = IdentifierCategory::Global;
    }
    seen.insert(tok.text);
    out.push_back({i, tok.text, category});
  }
  return out;
}

CompressedMethod compressIdentifier(const RawMethod& method, const std::set<std::string>& fileMethods,
                                    std::size_t maxTokens, const SubtokenOptions& options) {
  requireLimit(maxTokens, 1);
  CompressedMethod out = compressSignature(method, maxTokens, options);
  out.scheme = CompressionScheme::Identifier;
  std::size_t budget = maxTokens - out.tokens.size();

  const auto& body = method.bodyTokens;
  const auto match = matchBraces(body);
  std::map<std::size_t, std::vector<std::string>> chosen;  // body index -> emitted tokens

  auto takeBrace = [&](std::size_t idx) {
    if (idx == std::string::npos || chosen.count(idx)) return true;
    if (budget == 0) return false;
    chosen[idx] = {body[idx].text};
    --budget;
    return true;
  };

  bool exhausted = false;
  if (!body.empty() && body.front().isPunct("{")) {
    exhausted = !takeBrace(0) || !takeBrace(match[0]);
  }

  const auto classified = classifyIdentifiers(method, fileMethods);
  constexpr std::array<IdentifierCategory, 6> kPrecedence{
      IdentifierCategory::Local,          IdentifierCategory::Global,
      IdentifierCategory::UserType,       IdentifierCategory::ExternalMethod,
      IdentifierCategory::LocalMethod,    IdentifierCategory::Formal,
  };
  for (auto category : kPrecedence) {
    if (exhausted) break;
    std::set<std::string> names;
    for (const auto& item : classified) {
      if (item.category != category || !names.insert(item.name).second) continue;
      auto parts = subtokenize(item.name, options);
      if (parts.empty()) continue;
      for (std::size_t o = 0; o < body.size() && !exhausted; ++o) {
        if (o == 0 || !body[o].isPunct("{") || match[o] == std::string::npos) continue;
        if (o < item.bodyIndex && item.bodyIndex < match[o]) {
          exhausted = !takeBrace(o) || !takeBrace(match[o]);
        }
      }
      if (exhausted || parts.size() > budget) {
        exhausted = true;
        break;
      }
      budget -= parts.size();
      chosen[item.bodyIndex] = std::move(parts);
    }
  }

  for (auto& [idx, toks] : chosen) {
    out.tokens.insert(out.tokens.end(), toks.begin(), toks.end());
  }
  out.truncated = out.truncated || exhausted;
  return out;
}

std::vector<std::string> truncateComment(const std::vector<std::string>& sentenceTokens,
                                         std::size_t maxTokens) {
  requireLimit(maxTokens, 1);
  const std::size_t n = std::min(maxTokens, sentenceTokens.size());
  return {sentenceTokens.begin(), sentenceTokens.begin() + static_cast<std::ptrdiff_t>(n)};
}

CompressedMethod compressMethod(const RawMethod& method, const std::set<std::string>& fileMethods,
                                CompressionScheme scheme, std::size_t maxTokens,
                                const SubtokenOptions& options) {
  switch (scheme) {
    case CompressionScheme::Signature:
      return compressSignature(method, maxTokens, options);
    case CompressionScheme::BeginEnd: {
      auto tokens = codeSubtokens(method.signatureTokens, options);
      auto body = codeSubtokens(method.bodyTokens, options);
      tokens.insert(tokens.end(), body.begin(), body.end());
      return compressBeginEnd(tokens, maxTokens);
    }
    case CompressionScheme::Identifier:
      return compressIdentifier(method, fileMethods, maxTokens, options);
  }
  return compressSignature(method, maxTokens, options);
}

}  // namespace craic
