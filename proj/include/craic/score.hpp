#pragma once

#include "craic/compress.hpp"
#include "craic/neural/checkpoint.hpp"
#include "craic/textprep.hpp"
#include "craic/vocab.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace craic {

/// exp(-logProb / nTokens). Throws ZeroLength for nTokens == 0.
double perplexity(double logProb, std::size_t nTokens);
/// Bits per token, -logProb / (nTokens ln 2); perplexity == 2^crossEntropy.
double crossEntropy(double logProb, std::size_t nTokens);

struct ScoredSentence {
  std::string pairId;
  std::string file;
  int line = 0;
  std::string text;
  std::vector<std::string> sentenceTokens;
  std::optional<std::string> javadocTag;
  double logProb = 0;
  std::size_t nTokens = 0;  // predictions: sentence tokens plus EOS
  double perplexity = 0;
  double unkFraction = 0;   // share of sentence tokens outside the vocabulary
  bool emptyMethod = false;
  int rank = 0;

  double crossEntropyBits() const { return crossEntropy(logProb, nTokens); }
};

/// A checkpoint bound to the vocabularies it was trained with.
class ScoringModel {
 public:
  /// Throws VocabMismatch when a vocabulary's fingerprint differs from the
  /// checkpoint's record.
  ScoringModel(neural::Checkpoint checkpoint, Vocabulary commentVocab,
               std::optional<Vocabulary> methodVocab);

  const neural::Checkpoint& checkpoint() const { return checkpoint_; }
  neural::ModelKind kind() const { return checkpoint_.kind(); }
  const Vocabulary& commentVocab() const { return comment_; }

  /// Scores one sentence given the already compressed method tokens. A
  /// language model ignores the method.
  ScoredSentence score(const MethodCommentPair& pair, const std::vector<std::string>& methodTokens) const;

 private:
  neural::Checkpoint checkpoint_;
  Vocabulary comment_;
  std::optional<Vocabulary> method_;
};

/// Compresses `method` with `scheme` and scores the pair's sentence.
ScoredSentence scorePair(const ScoringModel& model, const MethodCommentPair& pair, const RawMethod& method,
                         const std::set<std::string>& fileMethods, CompressionScheme scheme,
                         std::size_t maxTokens = kDefaultMaxTokens);

/// Ascending perplexity, ties by pairId; assigns 1-based ranks.
std::vector<ScoredSentence> rankCorpus(std::vector<ScoredSentence> scored);

struct TagRow {
  std::string tag;  // "@param" etc., or "non-javadoc"
  std::size_t count = 0;
  double avgPerplexity = 0;
};

struct TagReport {
  std::vector<TagRow> rows;   // tags in name order, then non-javadoc
  std::size_t omitted = 0;    // sentences under tags below minCount
};

inline constexpr const char* kNonJavadoc = "non-javadoc";

/// Groups by block tag; an untagged sentence with inline tags (`{@link ..}`)
/// falls under its first inline tag, anything else under non-javadoc.
TagReport javadocReport(const std::vector<ScoredSentence>& scored, std::size_t minCount);

struct CategoryRow {
  std::string category;
  std::size_t count = 0;
  double mean = 0;
  double stdev = 0;
  double median = 0;  // nearest-rank
};

/// Per-category statistics over labeled sentences, categories in name order.
/// Throws UnknownPairId when a label names a pair that was not scored.
std::vector<CategoryRow> categoryReport(const std::vector<ScoredSentence>& scored,
                                        const std::map<std::string, std::string>& labels);

/// Tab-separated ranked report with a header line.
void writeRankedTsv(std::ostream& out, const std::vector<ScoredSentence>& ranked);
/// One JSON object per line with the same fields as the TSV.
void writeRankedJsonl(std::ostream& out, const std::vector<ScoredSentence>& ranked);

}  // namespace craic
