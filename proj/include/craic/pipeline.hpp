#pragma once

#include "craic/config.hpp"
#include "craic/neural/params.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace craic {

/// Artifact file names inside the work directory.
namespace artifact {
inline constexpr const char* kMethods = "methods.jsonl";
inline constexpr const char* kPairs = "pairs.jsonl";
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kVocabMethod = "vocab.method";
inline constexpr const char* kVocabComment = "vocab.comment";
inline constexpr const char* kLock = ".craic.lock";
std::string checkpoint(neural::ModelKind kind);  // model.lm.ckpt, model.s2s.ckpt
std::string scores(neural::ModelKind kind);      // scores.<kind>.jsonl
std::string ranked(neural::ModelKind kind);      // ranked.<kind>.tsv
std::string rankedJson(neural::ModelKind kind);  // ranked.<kind>.jsonl
std::string meta(const std::string& name);       // <name>.meta.json
}  // namespace artifact

/// Short model label: "lm" or "s2s".
std::string modelTag(neural::ModelKind kind);

/// Sidecar written next to every artifact.
struct ArtifactMeta {
  std::string stage;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;  // artifact or source name -> content hash
  std::string outputHash;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();

  nlohmann::ordered_json toJson() const;
  static ArtifactMeta load(const std::filesystem::path& path);
};

/// Refuses to proceed when an input artifact is missing (MissingArtifact),
/// was edited after it was written, or was produced from a different
/// version of another artifact now in the work directory (StaleArtifact).
/// `force` keeps only the existence check.
void checkInputs(const std::filesystem::path& work, const std::vector<std::string>& names, bool force);

/// Exclusive lock on a work directory for the lifetime of the object.
class WorkLock {
 public:
  explicit WorkLock(const std::filesystem::path& work);
  ~WorkLock();
  WorkLock(const WorkLock&) = delete;
  WorkLock& operator=(const WorkLock&) = delete;

 private:
  std::filesystem::path path_;
};

struct CommonArgs {
  PipelineConfig config;
  bool force = false;
};

void cmdExtract(const CommonArgs& args, std::ostream& out);
void cmdPrep(const CommonArgs& args, std::ostream& out);

struct TrainArgs {
  neural::ModelKind kind = neural::ModelKind::LanguageModel;
  /// Continue from the existing checkpoint up to the configured epoch count.
  bool resume = false;
};
void cmdTrain(const CommonArgs& args, const TrainArgs& train, std::ostream& out);

struct ScoreArgs {
  neural::ModelKind kind = neural::ModelKind::Seq2Seq;
  std::string split = "test";  // train, valid, test or all
  bool json = false;
};
void cmdScore(const CommonArgs& args, const ScoreArgs& score, std::ostream& out);

enum class ReportBy { Javadoc, Category, Stats };
ReportBy parseReportBy(const std::string& name);

struct ReportArgs {
  ReportBy by = ReportBy::Javadoc;
  neural::ModelKind kind = neural::ModelKind::Seq2Seq;
  std::filesystem::path labels;  // TSV of pair_id, category
};
void cmdReport(const CommonArgs& args, const ReportArgs& report, std::ostream& out);

/// Rewrites one Java source with the given comment sentences removed.
/// `removed` maps a method key (file:line) to segment indices to drop; a
/// comment left without sentences is deleted together with its line.
std::string stripSource(const std::string& source, const std::string& fileId,
                        const std::map<std::string, std::vector<std::size_t>>& removed);

}  // namespace craic
