// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include "craic/compress.hpp"
#include "craic/extract.hpp"
#include "craic/java_lexer.hpp"
#include "craic/neural/checkpoint.hpp"
#include "craic/neural/gradient_check.hpp"
#include "craic/neural/lstm.hpp"
#include "craic/neural/train.hpp"
#include "craic/pipeline.hpp"
#include "craic/records.hpp"
#include "craic/score.hpp"
#include "craic/textprep.hpp"

#include "fuzz_methods.hpp"
#include "synthetic.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace craic;
using neural::ModelKind;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

fs::path scratch(const std::string& tag) {
  const auto p = fs::temp_directory_path() / ("craic-accept-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string readAll(const fs::path& p) { return readFile(p); }

CommonArgs pipelineArgs(const fs::path& work, const fs::path& input) {
  CommonArgs a;
  a.config.work = work;
  a.config.input = input;
  return a;
}

/// Runs cmdTrain and pulls the test perplexity out of its summary row.
double trainAndTestPerplexity(const CommonArgs& a, ModelKind kind) {
  std::ostringstream out;
  cmdTrain(a, {kind, false}, out);
  std::istringstream in(out.str());
  std::string line;
  const std::string prefix = kind == ModelKind::LanguageModel ? "lm\t" : "s2s-";
  double test = NAN;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0) continue;
    test = std::stod(line.substr(line.find_last_of('\t') + 1));
  }
  return test;
}

std::vector<TokenId> randomIds(Rng& rng, std::size_t n, int vocab) {
  std::vector<TokenId> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<TokenId>(kReservedCount + rng.below(vocab - kReservedCount)));
  return out;
}

// 1 ------------------------------------------------------------------------
Outcome gradientFidelity() {
  const auto start = Clock::now();
  double worst = 0;
  std::string where;
  for (auto kind : {ModelKind::LanguageModel, ModelKind::Seq2Seq}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      neural::ModelConfig config;
      config.hiddenSize = 8;
      config.vocabSizeMethod = 20;
      config.vocabSizeComment = 20;
      config.seed = seed;
      config.initScale = 1.0;
      config.forgetBias = 0.0;
      Rng rng(seed + 1000);
      std::vector<neural::PairExample> sample;
      for (int i = 0; i < 2; ++i) sample.push_back({randomIds(rng, 3 + rng.below(3), 20), randomIds(rng, 5, 20)});
      const auto report = neural::gradientCheck(kind, config, sample);
      for (const auto& b : report.blocks) {
        if (b.maxRelativeError > worst) {
          worst = b.maxRelativeError;
          where = std::string(neural::modelKindName(kind)) + " seed " + std::to_string(seed) + " " + b.name;
        }
      }
    }
  }
  const double elapsed = secondsSince(start);
  return {worst < 1e-4 && elapsed < 60,
          "max relative error " + fmt(worst) + " (" + where + "), " + fmt(elapsed, "%.1f") + " s"};
}

// 2 ------------------------------------------------------------------------
Outcome perplexityOracles() {
  Rng rng(2);
  double worstUniform = 0, worstIdentity = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int v = 5 + static_cast<int>(rng.below(60));
    for (auto kind : {ModelKind::LanguageModel, ModelKind::Seq2Seq}) {
      const auto params = neural::ModelParams<double>::zeros({kind, 4, 1, kind == ModelKind::Seq2Seq ? 11 : 0, v});
      auto comment = randomIds(rng, rng.below(30), v);
      comment.insert(comment.begin(), kBos);
      comment.push_back(kEos);
      const double lp = kind == ModelKind::LanguageModel
                            ? neural::lmLogProb(params, comment)
                            : neural::seq2seqLogProb(params, randomIds(rng, rng.below(8), 11), comment).logProb;
      const double pp = perplexity(lp, comment.size() - 1);
      worstUniform = std::max(worstUniform, std::abs(pp - v) / v);
    }
  }
  for (int trial = 0; trial < 100000; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    const double lp = -rng.uniform(0, 12) * static_cast<double>(n);
    const double pp = perplexity(lp, n);
    worstIdentity = std::max(worstIdentity, std::abs(std::pow(2.0, crossEntropy(lp, n)) - pp) / pp);
  }
  return {worstUniform <= 1e-6 && worstIdentity <= 1e-9,
          "uniform pp vs V rel err " + fmt(worstUniform) + ", pp vs 2^xe rel err " + fmt(worstIdentity)};
}

// 3 ------------------------------------------------------------------------
Outcome perplexityOrdering() {
  const auto start = Clock::now();
  const auto root = scratch("ordering");
  testing::writeCorpus(testing::paraphraseCorpus(2000, 0.3, 17), root / "src");
  auto a = pipelineArgs(root / "work", root / "src");
  a.config.set("train_size", "1600");
  a.config.set("valid_size", "200");
  a.config.set("test_size", "200");
  std::ostringstream sink;
  cmdExtract(a, sink);
  cmdPrep(a, sink);
  const double lm = trainAndTestPerplexity(a, ModelKind::LanguageModel);
  const double s2s = trainAndTestPerplexity(a, ModelKind::Seq2Seq);

  neural::LmCorpus repeated;
  const std::vector<TokenId> sentence = {4, 5, 6, 7, 8, 9, 10, 11, 12};
  repeated.train.assign(16, sentence);
  neural::ModelConfig config;
  config.hiddenSize = 16;
  config.vocabSizeComment = 16;
  config.maxEpochs = 200;
  config.batchSize = 4;
  config.tbpttSteps = 10;
  config.dropoutKeep = 1.0;
  const auto memo = neural::trainLm(repeated, config);
  const double memoPp = neural::lmPerplexity(memo.best, {sentence});
  fs::remove_all(root);

  const double elapsed = secondsSince(start);
  const bool ordered = s2s <= 0.8 * lm;
  return {ordered && memoPp < 1.2 && elapsed < 900,
          "test pp s2s-begin-end " + fmt(s2s) + " vs lm " + fmt(lm) + " (ratio " + fmt(s2s / lm, "%.3f") +
              "), memorization pp " + fmt(memoPp) + ", " + fmt(elapsed, "%.0f") + " s"};
}

// 4 ------------------------------------------------------------------------
Outcome plantedRanking() {
  const auto root = scratch("planted");
  const auto corpus = testing::plantedCorpus(50, 50, 23);
  testing::writeCorpus(corpus, root / "src");
  auto a = pipelineArgs(root / "work", root / "src");
  a.config.set("train_size", "100");
  std::ostringstream sink;
  cmdExtract(a, sink);
  cmdPrep(a, sink);
  cmdTrain(a, {ModelKind::Seq2Seq, false}, sink);
  cmdScore(a, {ModelKind::Seq2Seq, "all", true}, sink);

  std::set<std::pair<std::string, int>> planted;
  for (const auto& m : corpus.methods) {
    if (m.planted) planted.insert({m.file, m.line});
  }
  std::size_t rows = 0, hits = 0;
  readJsonl(a.config.work / artifact::rankedJson(ModelKind::Seq2Seq), [&](const nlohmann::json& j) {
    if (++rows > 50) return;
    hits += planted.count({j["file"].get<std::string>(), j["line"].get<int>()});
  });
  fs::remove_all(root);
  return {rows == 100 && hits >= 40,
          std::to_string(hits) + " of the 50 lowest-perplexity sentences are planted restatements (" +
              std::to_string(rows) + " scored)"};
}

// 5 ------------------------------------------------------------------------
bool isSubsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  std::size_t j = 0;
  for (const auto& t : big) {
    if (j < small.size() && small[j] == t) ++j;
  }
  return j == small.size();
}

Outcome compressionInvariants() {
  Rng rng(5);
  std::size_t violations = 0;
  std::string first;
  auto fail = [&](const std::string& what, const std::string& src) {
    if (violations++ == 0) first = what + " on:\n" + src;
  };
  for (int trial = 0; trial < 10000; ++trial) {
    const auto f = testing::fuzzMethod(rng);
    const std::size_t L = 2 + rng.below(79);
    auto full = codeSubtokens(f.method.signatureTokens);
    const auto sigFull = full;
    const auto body = codeSubtokens(f.method.bodyTokens);
    full.insert(full.end(), body.begin(), body.end());
    const auto sig = compressMethod(f.method, f.fileMethods, CompressionScheme::Signature, L);
    const auto be = compressMethod(f.method, f.fileMethods, CompressionScheme::BeginEnd, L);
    const auto id = compressMethod(f.method, f.fileMethods, CompressionScheme::Identifier, L);
    if (sig.tokens.size() > L || be.tokens.size() > L || id.tokens.size() > L) fail("length above L", f.source);
    if (full.size() <= L && be.tokens != full) fail("begin-end not identity under the limit", f.source);
    if (sig.tokens.size() > sigFull.size() || !std::equal(sig.tokens.begin(), sig.tokens.end(), sigFull.begin())) {
      fail("signature output is not a signature prefix", f.source);
    }
    for (const auto& t : sig.tokens) {
      if (testing::bodyOnlyWords().count(t)) fail("signature output holds a body token", f.source);
    }
    const auto unbounded = compressIdentifier(f.method, f.fileMethods, std::size_t{1} << 30);
    if (!isSubsequence(id.tokens, unbounded.tokens)) fail("identifier output not a subsequence", f.source);
  }
  return {violations == 0, "10000 random methods, " + std::to_string(violations) + " violations" +
                               (violations ? "; first: " + first : "")};
}

// 6 ------------------------------------------------------------------------
Outcome pipelineDeterminism() {
  const fs::path fixtures = fs::path(CRAIC_FIXTURE_DIR) / "java";
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* tag : {"det-a", "det-b"}) {
    const auto root = scratch(tag);
    auto a = pipelineArgs(root, fixtures);
    a.config.seed = 7;
    a.config.minCount = 1;
    std::ostringstream sink;
    cmdExtract(a, sink);
    cmdPrep(a, sink);
    std::map<std::string, std::string> files;
    for (auto kind : {ModelKind::LanguageModel, ModelKind::Seq2Seq}) {
      cmdTrain(a, {kind, false}, sink);
      cmdScore(a, {kind, "all", true}, sink);
      cmdReport(a, {ReportBy::Javadoc, kind, {}}, sink);
      for (const auto& name : {artifact::checkpoint(kind), artifact::ranked(kind), artifact::rankedJson(kind),
                               artifact::scores(kind), "report.javadoc." + modelTag(kind) + ".tsv"}) {
        files[name] = readAll(root / name);
      }
    }
    cmdReport(a, {ReportBy::Stats, ModelKind::Seq2Seq, {}}, sink);
    files["report.stats.tsv"] = readAll(root / "report.stats.tsv");
    runs.push_back(std::move(files));
    fs::remove_all(root);
  }
  std::string differing;
  for (const auto& [name, bytes] : runs[0]) {
    if (runs[1].at(name) != bytes) differing += " " + name;
  }
  return {differing.empty(), differing.empty() ? std::to_string(runs[0].size()) + " artifacts byte-identical"
                                               : "differs:" + differing};
}

// 7 ------------------------------------------------------------------------
Outcome javadocExactness() {
  std::vector<ScoredSentence> scored;
  auto add = [&](const std::string& id, double pp, std::optional<std::string> tag) {
    ScoredSentence s;
    s.pairId = id;
    s.perplexity = pp;
    s.javadocTag = std::move(tag);
    scored.push_back(s);
  };
  for (int i = 0; i < 10; ++i) {
    add("p" + std::to_string(i), 2.0, "@param");
    add("r" + std::to_string(i), 4.0, "@return");
    add("n" + std::to_string(i), 8.0, std::nullopt);
  }
  const auto report = javadocReport(scored, 5);
  bool ok = report.rows.size() == 3 && report.omitted == 0;
  const std::vector<std::tuple<std::string, std::size_t, double>> expected = {
      {"@param", 10, 2.0}, {"@return", 10, 4.0}, {kNonJavadoc, 10, 8.0}};
  for (std::size_t i = 0; ok && i < 3; ++i) {
    ok = report.rows[i].tag == std::get<0>(expected[i]) && report.rows[i].count == std::get<1>(expected[i]) &&
         report.rows[i].avgPerplexity == std::get<2>(expected[i]);
  }
  for (int i = 0; i < 3; ++i) add("t" + std::to_string(i), 3.0, "@throws");
  const auto strict = javadocReport(scored, 25);
  const bool omitted = strict.rows.size() == 1 && strict.rows[0].tag == kNonJavadoc && strict.omitted == 23;
  return {ok && omitted, std::string("rows ") + (ok ? "exact" : "wrong") + ", sub-threshold tags " +
                             (omitted ? "omitted" : "not omitted")};
}

// 8 ------------------------------------------------------------------------
// Hand counts: one summary sentence plus @return, three plus @return, three.
Outcome listingExtraction() {
  const fs::path dir = fs::path(CRAIC_FIXTURE_DIR) / "java" / "listings";
  std::string detail;
  bool ok = true;
  for (const auto& [file, pairsWanted] : std::vector<std::pair<std::string, std::size_t>>{
           {"ProjectsEntryLocalServiceBase.java", 2}, {"TransferManagerConfiguration.java", 4}, {"C2DMessaging.java", 3}}) {
    std::size_t pairs = 0;
    for (const auto& m : minePairs(lexJava(readAll(dir / file)).tokens, file)) {
      pairs += segmentSentences(m.comment).size();
      ok = ok && buildPairs(m).size() == segmentSentences(m.comment).size();
    }
    ok = ok && pairs == pairsWanted;
    detail += (detail.empty() ? "" : ", ") + file + " -> " + std::to_string(pairs);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient fidelity", gradientFidelity},
      {"perplexity oracles", perplexityOracles},
      {"seq2seq beats LM at desk scale", perplexityOrdering},
      {"planted restatements rank lowest", plantedRanking},
      {"compression invariants", compressionInvariants},
      {"pipeline determinism", pipelineDeterminism},
      {"javadoc report exactness", javadocExactness},
      {"extraction of the three listings", listingExtraction},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed;
}
