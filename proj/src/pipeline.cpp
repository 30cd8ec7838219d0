#include "craic/pipeline.hpp"

#include "craic/error.hpp"
#include "craic/extract.hpp"
#include "craic/hash.hpp"
#include "craic/java_lexer.hpp"
#include "craic/neural/checkpoint.hpp"
#include "craic/neural/train.hpp"
#include "craic/records.hpp"
#include "craic/score.hpp"
#include "craic/textprep.hpp"
#include "craic/vocab.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace craic {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using neural::ModelKind;

namespace artifact {
std::string checkpoint(ModelKind kind) { return "model." + modelTag(kind) + ".ckpt"; }
std::string scores(ModelKind kind) { return "scores." + modelTag(kind) + ".jsonl"; }
std::string ranked(ModelKind kind) { return "ranked." + modelTag(kind) + ".tsv"; }
std::string rankedJson(ModelKind kind) { return "ranked." + modelTag(kind) + ".jsonl"; }
std::string meta(const std::string& name) { return name + ".meta.json"; }
}  // namespace artifact

std::string modelTag(ModelKind kind) { return kind == ModelKind::Seq2Seq ? "s2s" : "lm"; }

ordered_json ArtifactMeta::toJson() const {
  ordered_json j;
  j["stage"] = stage;
  j["seed"] = seed;
  ordered_json in = ordered_json::object();
  for (const auto& [k, v] : inputs) in[k] = v;
  j["inputs"] = in;
  j["output_hash"] = outputHash;
  j["settings"] = settings;
  return j;
}

ArtifactMeta ArtifactMeta::load(const fs::path& path) {
  ArtifactMeta m;
  try {
    const auto j = ordered_json::parse(readFile(path));
    m.stage = j.at("stage").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("inputs").items()) m.inputs[k] = v.get<std::string>();
    m.outputHash = j.at("output_hash").get<std::string>();
    m.settings = j.at("settings");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
  return m;
}

namespace {

void writeArtifact(const fs::path& work, const std::string& name, const std::string& bytes, ArtifactMeta meta) {
  meta.outputHash = hashBytes(bytes);
  writeFileAtomic(work / name, bytes);
  writeFileAtomic(work / artifact::meta(name), meta.toJson().dump(2) + "\n");
}

ArtifactMeta metaFor(const std::string& stage, const CommonArgs& args, const fs::path& work,
                     const std::vector<std::string>& inputs) {
  ArtifactMeta m;
  m.stage = stage;
  m.seed = args.config.seed;
  for (const auto& name : inputs) m.inputs[name] = hashFile(work / name);
  return m;
}

std::string stageInputsHint(const std::string& name) {
  if (name == artifact::kMethods || name == artifact::kPairs) return "run `craic extract` first";
  if (name == artifact::kCorpus || name == artifact::kVocabMethod || name == artifact::kVocabComment) {
    return "run `craic prep` first";
  }
  if (name.rfind("model.", 0) == 0) return "run `craic train` first";
  if (name.rfind("scores.", 0) == 0) return "run `craic score` first";
  return "rerun the producing stage";
}

}  // namespace

void checkInputs(const fs::path& work, const std::vector<std::string>& names, bool force) {
  for (const auto& name : names) {
    if (!fs::exists(work / name)) {
      throw Error(ErrorCode::MissingArtifact, "missing " + (work / name).string() + "; " + stageInputsHint(name));
    }
  }
  if (force) return;
  for (const auto& name : names) {
    const auto metaPath = work / artifact::meta(name);
    if (!fs::exists(metaPath)) {
      throw Error(ErrorCode::MissingArtifact, "missing " + metaPath.string() + "; " + stageInputsHint(name));
    }
    const auto meta = ArtifactMeta::load(metaPath);
    if (hashFile(work / name) != meta.outputHash) {
      throw Error(ErrorCode::StaleArtifact, name + " changed after it was written; " + stageInputsHint(name) +
                                                " or pass --force");
    }
    for (const auto& [input, hash] : meta.inputs) {
      const auto p = work / input;
      if (fs::exists(p) && hashFile(p) != hash) {
        throw Error(ErrorCode::StaleArtifact,
                    name + " was built from a different " + input + "; rerun its stage or pass --force");
      }
    }
  }
}

WorkLock::WorkLock(const fs::path& work) : path_(work / artifact::kLock) {
  fs::create_directories(work);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::LockHeld, "work directory " + work.string() + " is in use (remove " +
                                         path_.string() + " if no other craic process is running)");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  if (::write(fd, pid.data(), pid.size()) < 0) {
    // The lock holds through the file's existence; the pid is informational.
  }
  ::close(fd);
}

WorkLock::~WorkLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

ReportBy parseReportBy(const std::string& name) {
  if (name == "javadoc") return ReportBy::Javadoc;
  if (name == "category") return ReportBy::Category;
  if (name == "stats") return ReportBy::Stats;
  throw Error(ErrorCode::ConfigInvalid, "--by expects javadoc, category or stats, got '" + name + "'");
}

// ---------------------------------------------------------------- extract

namespace {

struct SourceFile {
  std::string id;  // path relative to the input root, '/'-separated
  fs::path path;
};

std::vector<SourceFile> listSources(const fs::path& input) {
  if (input.empty()) throw Error(ErrorCode::ConfigInvalid, "no input given (use --input or input=)");
  if (!fs::exists(input)) throw Error(ErrorCode::MissingArtifact, "input " + input.string() + " does not exist");
  std::vector<SourceFile> files;
  if (fs::is_regular_file(input) && input.extension() == ".java") {
    files.push_back({input.filename().generic_string(), input});
    return files;
  }
  if (fs::is_regular_file(input)) {
    // Manifest: one path per line, relative paths resolved against its directory.
    std::istringstream lines(readFile(input));
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      const fs::path listed = line;
      const fs::path path = listed.is_absolute() ? listed : input.parent_path() / listed;
      if (!fs::is_regular_file(path)) throw Error(ErrorCode::MissingArtifact, "manifest entry " + line + " not found");
      files.push_back({listed.lexically_normal().generic_string(), path});
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    files.erase(std::unique(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.id == b.id; }),
                files.end());
    return files;
  }
  for (const auto& entry : fs::recursive_directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      files.push_back({fs::relative(entry.path(), input).generic_string(), entry.path()});
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return files;
}

std::string jsonl(const std::vector<ordered_json>& rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

}  // namespace

void cmdExtract(const CommonArgs& args, std::ostream& out) {
  const auto& cfg = args.config;
  const auto files = listSources(cfg.input);
  WorkLock lock(cfg.work);

  std::vector<ordered_json> methodRows, pairRows;
  ArtifactMeta meta;
  meta.stage = "extract";
  meta.seed = cfg.seed;
  meta.settings["input"] = fs::absolute(cfg.input).lexically_normal().generic_string();
  ordered_json sourceIds = ordered_json::array();
  ordered_json sourcePaths = ordered_json::array();
  std::size_t diagnostics = 0;
  for (const auto& file : files) {
    const std::string text = readFile(file.path);
    meta.inputs["source:" + file.id] = hashBytes(text);
    sourceIds.push_back(file.id);
    sourcePaths.push_back(fs::absolute(file.path).lexically_normal().generic_string());
    auto lexed = lexJava(text);
    auto mined = mineFile(lexed.tokens, file.id);
    for (const auto* list : {&lexed.diagnostics, &mined.diagnostics}) {
      for (const auto& d : *list) {
        std::cerr << "warning: " << file.id << ":" << d.line << ":" << d.column << ": " << d.message << "\n";
        ++diagnostics;
      }
    }
    for (auto& pair : mined.pairs) {
      MethodRecord rec{pair, mined.declaredMethods};
      methodRows.push_back(rec.toJson());
      for (const auto& p : buildPairs(pair)) pairRows.push_back(pairToJson(p));
    }
  }
  meta.settings["sources"] = sourceIds;
  meta.settings["source_paths"] = sourcePaths;
  writeArtifact(cfg.work, artifact::kMethods, jsonl(methodRows), meta);
  writeArtifact(cfg.work, artifact::kPairs, jsonl(pairRows), meta);
  out << "extracted " << methodRows.size() << " commented methods and " << pairRows.size()
      << " sentence pairs from " << files.size() << " files";
  if (diagnostics) out << " (" << diagnostics << " warnings)";
  out << "\n";
}

// ------------------------------------------------------------------- prep

void cmdPrep(const CommonArgs& args, std::ostream& out) {
  const auto& cfg = args.config;
  const auto& work = cfg.work;
  checkInputs(work, {artifact::kMethods}, args.force);
  WorkLock lock(work);
  if (cfg.maxTokens < 2 || cfg.commentMaxTokens < 1) {
    throw Error(ErrorCode::ConfigInvalid, "max_tokens must be at least 2 and comment_max_tokens at least 1");
  }

  std::vector<CorpusRecord> records;
  for (const auto& m : readMethods(work / artifact::kMethods)) {
    const std::set<std::string> fileMethods(m.fileMethods.begin(), m.fileMethods.end());
    const auto compressed = compressMethod(m.pair.method, fileMethods, cfg.scheme, cfg.maxTokens);
    for (auto& p : buildPairs(m.pair)) {
      CorpusRecord r;
      p.sentence.tokens = truncateComment(p.sentence.tokens, cfg.commentMaxTokens);
      r.pair = std::move(p);
      r.compressedMethod = compressed.tokens;
      r.methodTruncated = compressed.truncated;
      records.push_back(std::move(r));
    }
  }

  std::size_t trainN = cfg.trainSize, validN = cfg.validSize, testN = cfg.testSize;
  if (trainN + validN + testN == 0) {
    validN = testN = records.size() / 10;
    trainN = records.size() - validN - testN;
  }
  const auto split = splitCorpus(records.size(), trainN, validN, testN, cfg.seed);
  for (auto i : split.train) records[i].split = "train";
  for (auto i : split.valid) records[i].split = "valid";
  for (auto i : split.test) records[i].split = "test";

  std::vector<std::vector<std::string>> methodStream, commentStream;
  for (auto i : split.train) {
    methodStream.push_back(records[i].compressedMethod);
    commentStream.push_back(records[i].pair.sentence.tokens);
  }
  const auto vocabMethod = Vocabulary::build(methodStream, cfg.vocabMethod);
  const auto vocabComment = Vocabulary::build(commentStream, cfg.vocabComment);

  std::vector<ordered_json> rows;
  for (const auto& r : records) rows.push_back(r.toJson());
  auto meta = metaFor("prep", args, work, {artifact::kMethods});
  meta.settings = cfg.prepSettings();
  writeArtifact(work, artifact::kCorpus, jsonl(rows), meta);
  writeArtifact(work, artifact::kVocabMethod, vocabMethod.serialize(), meta);
  writeArtifact(work, artifact::kVocabComment, vocabComment.serialize(), meta);
  out << "prepared " << records.size() << " pairs (train " << split.train.size() << ", valid "
      << split.valid.size() << ", test " << split.test.size() << "), scheme " << schemeName(cfg.scheme)
      << ", L=" << cfg.maxTokens << ", vocabularies " << vocabMethod.size() << " method / "
      << vocabComment.size() << " comment\n";
}

// ------------------------------------------------------------------ train

namespace {

struct EncodedCorpus {
  neural::PairCorpus pairs;
  std::vector<neural::PairExample> test;
};

EncodedCorpus encodeCorpus(const std::vector<CorpusRecord>& records, const Vocabulary& methodVocab,
                           const Vocabulary& commentVocab) {
  EncodedCorpus e;
  for (const auto& r : records) {
    if (!r.split) continue;
    neural::PairExample ex{methodVocab.encode(r.compressedMethod, false),
                           commentVocab.encode(r.pair.sentence.tokens, false)};
    if (*r.split == "train") e.pairs.train.push_back(std::move(ex));
    if (*r.split == "valid") e.pairs.valid.push_back(std::move(ex));
    if (*r.split == "test") e.test.push_back(std::move(ex));
  }
  return e;
}

std::vector<std::vector<TokenId>> commentsOf(const std::vector<neural::PairExample>& pairs) {
  std::vector<std::vector<TokenId>> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.comment);
  return out;
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void cmdTrain(const CommonArgs& args, const TrainArgs& train, std::ostream& out) {
  const auto& cfg = args.config;
  const auto& work = cfg.work;
  checkInputs(work, {artifact::kCorpus, artifact::kVocabMethod, artifact::kVocabComment}, args.force);
  WorkLock lock(work);

  const auto records = readCorpus(work / artifact::kCorpus);
  const auto vocabMethod = Vocabulary::load(work / artifact::kVocabMethod);
  const auto vocabComment = Vocabulary::load(work / artifact::kVocabComment);
  const auto data = encodeCorpus(records, vocabMethod, vocabComment);
  const bool s2s = train.kind == ModelKind::Seq2Seq;

  auto mc = cfg.modelConfig(train.kind);
  mc.vocabSizeComment = static_cast<int>(vocabComment.size());
  mc.vocabSizeMethod = s2s ? static_cast<int>(vocabMethod.size()) : 5;

  const auto ckptName = artifact::checkpoint(train.kind);
  std::optional<neural::ResumePoint> resume;
  if (train.resume) {
    checkInputs(work, {ckptName}, args.force);
    const auto previous = neural::Checkpoint::load(work / ckptName);
    resume = previous.resumePoint();
    if (!resume) throw Error(ErrorCode::FormatError, ckptName + " holds no resume state");
    out << "resuming after epoch " << resume->epoch << "\n";
  }

  const std::string label = s2s ? "s2s-" + std::string(schemeName(cfg.scheme)) : "lm";
  out << "training " << label << ": K=" << mc.hiddenSize << " layers=" << mc.layers
      << " V=" << (s2s ? std::to_string(mc.vocabSizeMethod) + "/" : "") << mc.vocabSizeComment
      << " pairs=" << data.pairs.train.size() << " epochs=" << mc.maxEpochs << "\n";
  out << "epoch\tlr\ttrain_pp\tvalid_pp\n";
  auto onEpoch = [&](const neural::EpochStats& s) {
    out << s.epoch << "\t" << fmt(s.learningRate, 4) << "\t" << fmt(s.trainPerplexity) << "\t"
        << fmt(s.validPerplexity) << (s.improved ? "\t*" : "") << "\n";
    out.flush();
  };

  neural::TrainResult result;
  neural::LmCorpus lm;
  if (s2s) {
    result = neural::trainSeq2seq(data.pairs, mc, resume, onEpoch);
  } else {
    lm.train = commentsOf(data.pairs.train);
    lm.valid = commentsOf(data.pairs.valid);
    result = neural::trainLm(lm, mc, resume, onEpoch);
  }

  neural::Checkpoint ck;
  ck.config = mc;
  ck.vocabComment = vocabComment.fingerprint();
  ck.vocabMethod = s2s ? vocabMethod.fingerprint() : "";
  ck.epoch = result.epochs;
  ck.bestEpoch = result.bestEpoch;
  ck.validPerplexity = result.bestValid;
  ck.learningRate = result.learningRate;
  ck.extra["compression"] = std::string(schemeName(cfg.scheme));
  ck.extra["max_tokens"] = std::to_string(cfg.maxTokens);
  ck.params = result.best;
  ck.last = result.last;
  auto meta = metaFor("train", args, work, {artifact::kCorpus, artifact::kVocabMethod, artifact::kVocabComment});
  meta.settings["model"] = label;
  meta.settings["epochs"] = result.epochs;
  meta.settings["best_epoch"] = result.bestEpoch;
  writeArtifact(work, ckptName, ck.serialize(), meta);

  auto evalPp = [&](const std::vector<neural::PairExample>& set) -> std::string {
    if (set.empty()) return "-";
    return fmt(s2s ? neural::seq2seqPerplexity(ck.params, set, mc.batchSize)
                   : neural::lmPerplexity(ck.params, commentsOf(set), mc.batchSize));
  };
  out << "\nmodel\ttrain\tvalid\ttest\n"
      << label << "\t" << evalPp(data.pairs.train) << "\t" << evalPp(data.pairs.valid) << "\t"
      << evalPp(data.test) << "\n";
  out << "wrote " << (work / ckptName).string() << " (best epoch " << result.bestEpoch << ")\n";
}

// ------------------------------------------------------------------ score

namespace {

ordered_json scoredToJson(const ScoredSentence& s) {
  ordered_json j;
  j["pair_id"] = s.pairId;
  j["file"] = s.file;
  j["line"] = s.line;
  j["rank"] = s.rank;
  j["log_prob"] = s.logProb;
  j["n_tokens"] = s.nTokens;
  j["perplexity"] = s.perplexity;
  j["unk_fraction"] = s.unkFraction;
  j["empty_method"] = s.emptyMethod;
  j["javadoc_tag"] = s.javadocTag ? ordered_json(*s.javadocTag) : ordered_json();
  j["sentence_text"] = s.text;
  j["sentence_tokens"] = s.sentenceTokens;
  return j;
}

ScoredSentence scoredFromJson(const json& j) {
  ScoredSentence s;
  s.pairId = j.at("pair_id").get<std::string>();
  s.file = j.at("file").get<std::string>();
  s.line = j.at("line").get<int>();
  s.rank = j.at("rank").get<int>();
  s.logProb = j.at("log_prob").get<double>();
  s.nTokens = j.at("n_tokens").get<std::size_t>();
  s.perplexity = j.at("perplexity").get<double>();
  s.unkFraction = j.at("unk_fraction").get<double>();
  s.emptyMethod = j.at("empty_method").get<bool>();
  if (!j.at("javadoc_tag").is_null()) s.javadocTag = j.at("javadoc_tag").get<std::string>();
  s.text = j.at("sentence_text").get<std::string>();
  s.sentenceTokens = j.at("sentence_tokens").get<std::vector<std::string>>();
  return s;
}

void writeStripped(const CommonArgs& args, const std::vector<ScoredSentence>& ranked, double threshold,
                   std::ostream& out) {
  const auto& work = args.config.work;
  const auto meta = ArtifactMeta::load(work / artifact::meta(artifact::kMethods));
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> removed;  // file -> key -> segments
  std::size_t count = 0;
  for (const auto& s : ranked) {
    if (s.perplexity >= threshold) continue;
    const auto colon = s.pairId.rfind(':');
    const std::string key = s.pairId.substr(0, colon);
    removed[s.file][key].push_back(std::stoul(s.pairId.substr(colon + 1)));
    ++count;
  }
  const auto& ids = meta.settings.at("sources");
  const auto& paths = meta.settings.at("source_paths");
  std::size_t files = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto fileId = ids[i].get<std::string>();
    const fs::path src = paths[i].get<std::string>();
    const auto it = removed.find(fileId);
    const std::string text = readFile(src);
    writeFileAtomic(work / "stripped" / fileId, it == removed.end() ? text : stripSource(text, fileId, it->second));
    ++files;
  }
  out << "stripped " << count << " sentences below perplexity " << threshold << " into "
      << (work / "stripped").string() << " (" << files << " files)\n";
}

}  // namespace

void cmdScore(const CommonArgs& args, const ScoreArgs& score, std::ostream& out) {
  const auto& cfg = args.config;
  const auto& work = cfg.work;
  const auto ckptName = artifact::checkpoint(score.kind);
  checkInputs(work, {ckptName, artifact::kCorpus, artifact::kVocabMethod, artifact::kVocabComment}, args.force);
  if (score.split != "train" && score.split != "valid" && score.split != "test" && score.split != "all") {
    throw Error(ErrorCode::ConfigInvalid, "--split expects train, valid, test or all");
  }
  WorkLock lock(work);

  std::optional<Vocabulary> methodVocab;
  if (score.kind == ModelKind::Seq2Seq) methodVocab = Vocabulary::load(work / artifact::kVocabMethod);
  const ScoringModel model(neural::Checkpoint::load(work / ckptName),
                           Vocabulary::load(work / artifact::kVocabComment), std::move(methodVocab));

  std::vector<ScoredSentence> scored;
  std::size_t emptyMethods = 0;
  for (const auto& r : readCorpus(work / artifact::kCorpus)) {
    if (score.split != "all" && r.split != score.split) continue;
    scored.push_back(model.score(r.pair, r.compressedMethod));
    emptyMethods += scored.back().emptyMethod;
  }
  if (scored.empty()) throw Error(ErrorCode::EmptyCorpus, "no pairs in split '" + score.split + "'");
  const auto ranked = rankCorpus(std::move(scored));

  auto meta = metaFor("score", args, work, {ckptName, artifact::kCorpus, artifact::kVocabMethod, artifact::kVocabComment});
  meta.settings["split"] = score.split;
  std::vector<ordered_json> rows;
  for (const auto& s : ranked) rows.push_back(scoredToJson(s));
  writeArtifact(work, artifact::scores(score.kind), jsonl(rows), meta);
  std::ostringstream tsv;
  writeRankedTsv(tsv, ranked);
  writeArtifact(work, artifact::ranked(score.kind), tsv.str(), meta);
  if (score.json) {
    std::ostringstream js;
    writeRankedJsonl(js, ranked);
    writeArtifact(work, artifact::rankedJson(score.kind), js.str(), meta);
  }
  out << "ranked " << ranked.size() << " sentences into " << (work / artifact::ranked(score.kind)).string() << "\n";
  if (emptyMethods) out << emptyMethods << " pairs had an empty method and were scored from a zero state\n";
  if (cfg.stripThreshold) writeStripped(args, ranked, *cfg.stripThreshold, out);
}

// ----------------------------------------------------------------- report

namespace {

std::map<std::string, std::string> readLabels(const fs::path& path) {
  std::map<std::string, std::string> labels;
  std::istringstream in(readFile(path));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool header = first && line.rfind("pair_id\t", 0) == 0;
    first = false;
    if (line.empty() || header) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorCode::FormatError, path.string() + ": expected pair_id<TAB>category");
    labels[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return labels;
}

std::string quartileRow(const std::string& name, const Quartiles& q) {
  return name + "\t" + fmt(q.mean) + "\t" + fmt(q.median) + "\t" + fmt(q.q1) + "\t" + fmt(q.q3) + "\n";
}

}  // namespace

void cmdReport(const CommonArgs& args, const ReportArgs& report, std::ostream& out) {
  const auto& cfg = args.config;
  const auto& work = cfg.work;
  std::string body, name;
  if (report.by == ReportBy::Stats) {
    checkInputs(work, {artifact::kMethods}, args.force);
    std::vector<MethodFullCommentPair> pairs;
    for (auto& m : readMethods(work / artifact::kMethods)) pairs.push_back(std::move(m.pair));
    const auto stats = corpusStats(pairs);
    body = "pairs\t" + std::to_string(stats.pairCount) + "\n" + "length\tmean\tmedian\tq1\tq3\n" +
           quartileRow("method", stats.methodTokens) + quartileRow("comment", stats.commentTokens);
    name = "report.stats.tsv";
  } else {
    const auto scoresName = artifact::scores(report.kind);
    checkInputs(work, {scoresName}, args.force);
    std::vector<ScoredSentence> scored;
    readJsonl(work / scoresName, [&](const json& j) { scored.push_back(scoredFromJson(j)); });
    if (report.by == ReportBy::Javadoc) {
      const auto r = javadocReport(scored, cfg.minCount);
      body = "tag\tcount\tavg_perplexity\n";
      for (const auto& row : r.rows) body += row.tag + "\t" + std::to_string(row.count) + "\t" + fmt(row.avgPerplexity) + "\n";
      if (r.omitted) {
        out << "omitted " << r.omitted << " sentences under tags seen fewer than " << cfg.minCount << " times\n";
      }
      name = "report.javadoc." + modelTag(report.kind) + ".tsv";
    } else {
      if (report.labels.empty()) throw Error(ErrorCode::ConfigInvalid, "--by category needs --labels FILE");
      const auto rows = categoryReport(scored, readLabels(report.labels));
      body = "category\tcount\tmean\tstdev\tmedian\n";
      for (const auto& row : rows) {
        body += row.category + "\t" + std::to_string(row.count) + "\t" + fmt(row.mean) + "\t" + fmt(row.stdev) +
                "\t" + fmt(row.median) + "\n";
      }
      name = "report.category." + modelTag(report.kind) + ".tsv";
    }
  }
  WorkLock lock(work);
  writeFileAtomic(work / name, body);
  out << body;
}

// ------------------------------------------------------------------ strip

std::string stripSource(const std::string& source, const std::string& fileId,
                        const std::map<std::string, std::vector<std::size_t>>& removed) {
  auto tokens = lexJava(source).tokens;
  const auto mined = mineFile(tokens, fileId);
  std::map<int, std::string> replacement;  // comment start line -> new text ("" deletes)
  std::map<int, int> column;
  for (const auto& pair : mined.pairs) {
    const auto it = removed.find(methodKey(pair.method));
    if (it == removed.end()) continue;
    const std::set<std::size_t> drop(it->second.begin(), it->second.end());
    const auto sentences = segmentSentences(pair.comment);
    std::vector<std::string> kept;
    for (std::size_t k = 0; k < sentences.size(); ++k) {
      if (!drop.count(k)) kept.push_back(sentences[k].text);
    }
    std::string text;
    if (!kept.empty()) {
      text = pair.comment.isJavadocStyle ? "/**" : "/*";
      for (const auto& s : kept) {
        std::string flat = s;
        std::replace(flat.begin(), flat.end(), '\n', ' ');
        text += "\n@INDENT@ * " + flat;
      }
      text += "\n@INDENT@ */";
    }
    replacement[pair.comment.startLine] = text;
  }

  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    const auto rep = tok.kind == TokenKind::Comment && tok.text.rfind("/*", 0) == 0 ? replacement.find(tok.line)
                                                                                     : replacement.end();
    if (rep == replacement.end()) {
      out += tok.text;
      continue;
    }
    const std::string indent(static_cast<std::size_t>(std::max(0, tok.column - 1)), ' ');
    if (!rep->second.empty()) {
      std::string text = rep->second;
      for (auto p = text.find("@INDENT@"); p != std::string::npos; p = text.find("@INDENT@", p)) {
        text.replace(p, 8, indent);
      }
      out += text;
      continue;
    }
    // Delete the comment with its line: drop indentation before it and the
    // rest of its line after it.
    const auto lineStart = out.find_last_of('\n');
    const auto from = lineStart == std::string::npos ? 0 : lineStart + 1;
    if (out.find_first_not_of(" \t", from) == std::string::npos) out.erase(from);
    if (i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::Whitespace) {
      auto& ws = tokens[i + 1].text;
      const auto nl = ws.find('\n');
      if (nl != std::string::npos) ws.erase(0, nl + 1);
    }
  }
  return out;
}

}  // namespace craic
