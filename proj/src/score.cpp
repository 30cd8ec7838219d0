#include "craic/score.hpp"

#include "craic/error.hpp"
#include "craic/neural/lstm.hpp"
#include "craic/statistics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace craic {

double perplexity(double logProb, std::size_t nTokens) {
  if (nTokens == 0) throw Error(ErrorCode::ZeroLength, "perplexity of an empty sequence");
  return std::exp(-logProb / static_cast<double>(nTokens));
}

double crossEntropy(double logProb, std::size_t nTokens) {
  if (nTokens == 0) throw Error(ErrorCode::ZeroLength, "cross-entropy of an empty sequence");
  return -logProb / (static_cast<double>(nTokens) * std::log(2.0));
}

ScoringModel::ScoringModel(neural::Checkpoint checkpoint, Vocabulary commentVocab,
                           std::optional<Vocabulary> methodVocab)
    : checkpoint_(std::move(checkpoint)), comment_(std::move(commentVocab)), method_(std::move(methodVocab)) {
  if (comment_.fingerprint() != checkpoint_.vocabComment) {
    throw Error(ErrorCode::VocabMismatch, "comment vocabulary " + comment_.fingerprint() +
                                              " does not match checkpoint " + checkpoint_.vocabComment);
  }
  if (kind() == neural::ModelKind::Seq2Seq) {
    if (!method_) throw Error(ErrorCode::VocabMismatch, "sequence-to-sequence scoring needs a method vocabulary");
    if (method_->fingerprint() != checkpoint_.vocabMethod) {
      throw Error(ErrorCode::VocabMismatch, "method vocabulary " + method_->fingerprint() +
                                                " does not match checkpoint " + checkpoint_.vocabMethod);
    }
  }
}

ScoredSentence ScoringModel::score(const MethodCommentPair& pair,
                                   const std::vector<std::string>& methodTokens) const {
  ScoredSentence s;
  s.pairId = pair.pairId;
  s.file = pair.file;
  s.line = pair.line;
  s.text = pair.sentence.text;
  s.sentenceTokens = pair.sentence.tokens;
  s.javadocTag = pair.sentence.javadocTag;

  const auto ids = comment_.encode(pair.sentence.tokens, true);
  std::size_t unk = 0;
  for (std::size_t i = 1; i + 1 < ids.size(); ++i) unk += ids[i] == kUnk;
  s.unkFraction = pair.sentence.tokens.empty()
                      ? 0.0
                      : static_cast<double>(unk) / static_cast<double>(pair.sentence.tokens.size());

  const auto& params = checkpoint_.params;
  if (kind() == neural::ModelKind::Seq2Seq) {
    const auto methodIds = method_->encode(methodTokens, false);
    const auto r = neural::seq2seqLogProb(params, methodIds, ids);
    s.logProb = r.logProb;
    s.emptyMethod = r.emptyMethod;
  } else {
    s.logProb = neural::lmLogProb(params, ids);
  }
  s.nTokens = ids.size() - 1;
  s.perplexity = perplexity(s.logProb, s.nTokens);
  return s;
}

ScoredSentence scorePair(const ScoringModel& model, const MethodCommentPair& pair, const RawMethod& method,
                         const std::set<std::string>& fileMethods, CompressionScheme scheme,
                         std::size_t maxTokens) {
  if (model.kind() == neural::ModelKind::LanguageModel) return model.score(pair, {});
  return model.score(pair, compressMethod(method, fileMethods, scheme, maxTokens).tokens);
}

std::vector<ScoredSentence> rankCorpus(std::vector<ScoredSentence> scored) {
  std::sort(scored.begin(), scored.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
    if (a.perplexity != b.perplexity) return a.perplexity < b.perplexity;
    return a.pairId < b.pairId;
  });
  for (std::size_t i = 0; i < scored.size(); ++i) scored[i].rank = static_cast<int>(i + 1);
  return scored;
}

TagReport javadocReport(const std::vector<ScoredSentence>& scored, std::size_t minCount) {
  std::map<std::string, std::vector<double>> byTag;
  std::vector<double> untagged;
  for (const auto& s : scored) {
    if (s.javadocTag) {
      byTag[*s.javadocTag].push_back(s.perplexity);
    } else if (const auto inl = inlineTags(s.text); !inl.empty()) {
      byTag[inl.front()].push_back(s.perplexity);
    } else {
      untagged.push_back(s.perplexity);
    }
  }
  TagReport report;
  for (const auto& [tag, pps] : byTag) {
    if (pps.size() < minCount) {
      report.omitted += pps.size();
      continue;
    }
    report.rows.push_back({tag, pps.size(), stats::mean(pps)});
  }
  if (!untagged.empty()) report.rows.push_back({kNonJavadoc, untagged.size(), stats::mean(untagged)});
  return report;
}

std::vector<CategoryRow> categoryReport(const std::vector<ScoredSentence>& scored,
                                        const std::map<std::string, std::string>& labels) {
  std::map<std::string, const ScoredSentence*> byId;
  for (const auto& s : scored) byId.emplace(s.pairId, &s);
  std::map<std::string, std::vector<double>> groups;
  for (const auto& [pairId, category] : labels) {
    auto it = byId.find(pairId);
    if (it == byId.end()) throw Error(ErrorCode::UnknownPairId, "label for unknown pair " + pairId);
    groups[category].push_back(it->second->perplexity);
  }
  std::vector<CategoryRow> rows;
  for (const auto& [category, pps] : groups) {
    rows.push_back({category, pps.size(), stats::mean(pps), stats::sampleStdev(pps),
                    stats::nearestRank(pps, 0.5)});
  }
  return rows;
}

namespace {

std::string flat(std::string text) {
  for (char& c : text) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void writeRankedTsv(std::ostream& out, const std::vector<ScoredSentence>& ranked) {
  out << "rank\tperplexity\tcross_entropy_bits\tunk_fraction\tjavadoc_tag\tfile\tline\tsentence_text\n";
  for (const auto& s : ranked) {
    out << s.rank << '\t' << fixed(s.perplexity, 6) << '\t' << fixed(s.crossEntropyBits(), 6) << '\t'
        << fixed(s.unkFraction, 4) << '\t' << s.javadocTag.value_or("") << '\t' << flat(s.file) << '\t'
        << s.line << '\t' << flat(s.text) << '\n';
  }
}

void writeRankedJsonl(std::ostream& out, const std::vector<ScoredSentence>& ranked) {
  for (const auto& s : ranked) {
    nlohmann::ordered_json row;
    row["rank"] = s.rank;
    row["perplexity"] = s.perplexity;
    row["cross_entropy_bits"] = s.crossEntropyBits();
    row["unk_fraction"] = s.unkFraction;
    row["javadoc_tag"] = s.javadocTag ? nlohmann::ordered_json(*s.javadocTag) : nlohmann::ordered_json();
    row["file"] = s.file;
    row["line"] = s.line;
    row["sentence_text"] = s.text;
    out << row.dump() << '\n';
  }
}

}  // namespace craic
