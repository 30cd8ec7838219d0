#include "craic/extract.hpp"
#include "craic/java_lexer.hpp"
#include "craic/rng.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace craic {
namespace {

using testing::fixturePath;
using testing::readText;

std::string concat(const std::vector<SourceToken>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.text;
  return out;
}

TEST(Lexer, DeclarationTokens) {
  const auto r = lexJava("int x;");
  ASSERT_EQ(r.tokens.size(), 4u);
  EXPECT_TRUE(r.tokens[0].is(TokenKind::Keyword, "int"));
  EXPECT_EQ(r.tokens[1].kind, TokenKind::Whitespace);
  EXPECT_TRUE(r.tokens[2].is(TokenKind::Identifier, "x"));
  EXPECT_TRUE(r.tokens[3].isPunct(";"));
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Lexer, EmptyInput) { EXPECT_TRUE(lexJava("").tokens.empty()); }

TEST(Lexer, BlockCommentIsOneToken) {
  const auto r = lexJava("/* a */ y");
  ASSERT_EQ(r.tokens.size(), 3u);
  EXPECT_TRUE(r.tokens[0].is(TokenKind::Comment, "/* a */"));
  EXPECT_EQ(r.tokens[1].kind, TokenKind::Whitespace);
  EXPECT_TRUE(r.tokens[2].is(TokenKind::Identifier, "y"));
}

TEST(Lexer, LiteralsStayWhole) {
  const auto r = lexJava(R"(s = "a \" b"; c = '\''; n = 0x1Fl; d = 1.5e-3f;)");
  std::vector<std::string> literals;
  for (const auto& t : r.tokens) {
    if (t.kind == TokenKind::Literal) literals.push_back(t.text);
  }
  EXPECT_EQ(literals, (std::vector<std::string>{R"("a \" b")", R"('\'')", "0x1Fl", "1.5e-3f"}));
}

TEST(Lexer, LineAndColumn) {
  const auto r = lexJava("a\n  b");
  EXPECT_EQ(r.tokens[0].line, 1);
  EXPECT_EQ(r.tokens[2].line, 2);
  EXPECT_EQ(r.tokens[2].column, 3);
}

TEST(Lexer, UnterminatedStringReportedAndRecovered) {
  const std::string src = "s = \"open\nint y;";
  const auto r = lexJava(src);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, ErrorCode::UnterminatedLiteral);
  EXPECT_EQ(r.diagnostics[0].line, 1);
  EXPECT_EQ(concat(r.tokens), src);
  bool sawY = false;
  for (const auto& t : r.tokens) sawY |= t.is(TokenKind::Identifier, "y");
  EXPECT_TRUE(sawY);
}

TEST(Lexer, UnterminatedCommentReported) {
  const std::string src = "int a; /* never closed";
  const auto r = lexJava(src);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, ErrorCode::UnterminatedComment);
  EXPECT_EQ(concat(r.tokens), src);
}

TEST(Lexer, RoundTripFixtures) {
  for (const auto& entry : std::filesystem::recursive_directory_iterator(fixturePath("java"))) {
    if (!entry.is_regular_file()) continue;
    const auto text = readText(entry.path());
    const auto r = lexJava(text);
    EXPECT_EQ(concat(r.tokens), text) << entry.path();
  }
}

// Property: any byte soup survives lexing unchanged, with non-decreasing positions.
TEST(Lexer, RoundTripRandomInput) {
  const std::string alphabet = "ab_Z09 \t\n\r{}()[];.,=+-*/%<>!&|^~?:@\"'\\#$";
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string src;
    const auto n = rng.below(80);
    for (std::uint64_t i = 0; i < n; ++i) src += alphabet[rng.below(alphabet.size())];
    const auto r = lexJava(src);
    ASSERT_EQ(concat(r.tokens), src);
    for (std::size_t i = 1; i < r.tokens.size(); ++i) {
      const auto& a = r.tokens[i - 1];
      const auto& b = r.tokens[i];
      ASSERT_TRUE(b.line > a.line || (b.line == a.line && b.column > a.column));
    }
  }
}

TEST(Lexer, ClassifyTokenText) {
  EXPECT_EQ(classifyTokenText("while"), TokenKind::Keyword);
  EXPECT_EQ(classifyTokenText("fooBar"), TokenKind::Identifier);
  EXPECT_EQ(classifyTokenText("\"x y\""), TokenKind::Literal);
  EXPECT_EQ(classifyTokenText("42"), TokenKind::Literal);
  EXPECT_EQ(classifyTokenText("{"), TokenKind::Punctuation);
  EXPECT_EQ(classifyTokenText(">>="), TokenKind::Operator);
}

std::vector<MethodFullCommentPair> mine(const std::string& src) { return minePairs(lexJava(src).tokens, "T.java"); }

TEST(MinePairs, ListingOne) {
  const auto pairs = mine(readText(fixturePath("java/listings/ProjectsEntryLocalServiceBase.java")));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].method.name, "getProjectsEntryPersistence");
  EXPECT_FALSE(pairs[0].comment.isJavadocStyle);
  EXPECT_EQ(pairs[0].comment.text.rfind("Returns the projects entry persistence", 0), 0u);
}

TEST(MinePairs, UncommentedMethodSkipped) {
  EXPECT_TRUE(mine("class A { void f() { } }").empty());
}

TEST(MinePairs, InlineCommentRemovedFromBody) {
  const auto pairs = mine("class A {\n /** Doc. */\n void f() {\n // note\n g(); /* x */ }\n}");
  ASSERT_EQ(pairs.size(), 1u);
  std::string body;
  for (const auto& t : pairs[0].method.bodyTokens) {
    EXPECT_NE(t.kind, TokenKind::Comment);
    EXPECT_NE(t.kind, TokenKind::Whitespace);
    body += t.text;
  }
  EXPECT_EQ(body, "{g();}");
}

TEST(MinePairs, AnnotationsKeepAdjacencyAndJoinSignature) {
  const auto pairs = mine("class A {\n /** Doc. */\n @Override\n public String toString() { return s; }\n}");
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].method.signatureTokens.front().text, "@");
  EXPECT_EQ(pairs[0].method.signatureTokens[1].text, "Override");
  EXPECT_EQ(pairs[0].method.signatureTokens.back().text, ")");
}

TEST(MinePairs, CodeBetweenCommentAndMethodBreaksAdjacency) {
  EXPECT_TRUE(mine("class A {\n /** Doc. */\n int x;\n void f() { }\n}").empty());
}

TEST(MinePairs, LineCommentIsNotAMethodComment) {
  EXPECT_TRUE(mine("class A {\n // Doc.\n void f() { }\n}").empty());
  // A line comment between the block comment and the method also breaks adjacency.
  EXPECT_TRUE(mine("class A {\n /** Doc. */\n // more\n void f() { }\n}").empty());
}

TEST(MinePairs, ConstructorsCountInitializersDoNot) {
  const auto pairs = mine("class A {\n /** Init. */\n static { x = 1; }\n /** Make. */\n A(int x) { }\n}");
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].method.name, "A");
  EXPECT_EQ(pairs[0].method.formals, std::vector<std::string>{"x"});
}

TEST(MinePairs, NestedClassMethodsBelongToOuterBody) {
  const auto pairs = mine(
      "class A {\n /** Outer. */\n void f() {\n  Runnable r = new Runnable() {\n   /** Inner. */\n"
      "   public void run() { }\n  };\n }\n}");
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].method.name, "f");
}

TEST(MinePairs, ThrowsClauseInSignature) {
  const auto pairs = mine("class A {\n /** Doc. */\n void f() throws IOException, X { }\n}");
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].method.signatureTokens.back().text, "X");
}

TEST(MinePairs, AbstractMethodsAreSkipped) {
  EXPECT_TRUE(mine("interface A {\n /** Doc. */\n void f();\n}").empty());
}

TEST(MinePairs, BraceImbalanceSkipsMethodKeepsFile) {
  const auto mined = mineFile(lexJava("class A {\n /** One. */\n void f() { if (x) { }\n").tokens, "T.java");
  EXPECT_TRUE(mined.pairs.empty());
  ASSERT_FALSE(mined.diagnostics.empty());
  EXPECT_EQ(mined.diagnostics[0].code, ErrorCode::BraceImbalance);
}

TEST(MinePairs, CommentEndsBeforeMethodAndOrderIsStable) {
  for (const auto& entry : std::filesystem::recursive_directory_iterator(fixturePath("java"))) {
    if (!entry.is_regular_file()) continue;
    const auto tokens = lexJava(readText(entry.path())).tokens;
    const auto pairs = minePairs(tokens, "x");
    const auto again = minePairs(tokens, "x");
    ASSERT_EQ(pairs.size(), again.size());
    int prevLine = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      const int commentLines = static_cast<int>(std::count(p.comment.text.begin(), p.comment.text.end(), '\n'));
      EXPECT_LT(p.comment.startLine + commentLines, p.method.startLine);
      EXPECT_GT(p.method.startLine, prevLine);
      prevLine = p.method.startLine;
      EXPECT_EQ(p.method.name, again[i].method.name);
      EXPECT_EQ(p.comment.text.find("*/"), std::string::npos);
      EXPECT_EQ(p.comment.text.find("/*"), std::string::npos);
    }
  }
}

TEST(BlockComment, GuttersAndDelimitersStripped) {
  const auto c = parseBlockComment("/**\n   * First line.\n   * Second line.\n   */", 4);
  EXPECT_TRUE(c.isJavadocStyle);
  EXPECT_EQ(c.startLine, 4);
  EXPECT_EQ(c.text, "First line.\nSecond line.");
  EXPECT_FALSE(parseBlockComment("/* plain */", 1).isJavadocStyle);
  EXPECT_EQ(parseBlockComment("/* plain */", 1).text, "plain");
}

MethodFullCommentPair pairWithBody(int tokens) {
  MethodFullCommentPair p;
  p.method.signatureTokens = {{"f", TokenKind::Identifier}};
  for (int i = 1; i < tokens; ++i) p.method.bodyTokens.push_back({"x", TokenKind::Identifier});
  p.comment.text = "Doc.";
  return p;
}

TEST(CorpusStats, FourPairs) {
  std::vector<MethodFullCommentPair> pairs;
  for (int n : {10, 20, 30, 100}) pairs.push_back(pairWithBody(n));
  const auto s = corpusStats(pairs);
  EXPECT_EQ(s.pairCount, 4u);
  EXPECT_DOUBLE_EQ(s.methodTokens.median, 25.0);
  EXPECT_DOUBLE_EQ(s.methodTokens.mean, 40.0);
  EXPECT_DOUBLE_EQ(s.methodTokens.q1, 10.0);
  EXPECT_DOUBLE_EQ(s.methodTokens.q3, 30.0);
  EXPECT_DOUBLE_EQ(s.commentTokens.mean, 2.0);  // "doc", "."
}

TEST(CorpusStats, Singleton) {
  const auto s = corpusStats({pairWithBody(17)});
  EXPECT_DOUBLE_EQ(s.methodTokens.mean, 17);
  EXPECT_DOUBLE_EQ(s.methodTokens.median, 17);
  EXPECT_DOUBLE_EQ(s.methodTokens.q1, 17);
  EXPECT_DOUBLE_EQ(s.methodTokens.q3, 17);
}

TEST(CorpusStats, EmptyThrows) {
  try {
    corpusStats({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCorpus);
  }
}

}  // namespace
}  // namespace craic
