// craic: rank Java comment sentences by how predictable they are from code.
//
//   craic extract --input SRC --work W
//   craic prep    --work W [--compression begin-end] [--max-tokens 50]
//   craic train   --work W --model lm|s2s
//   craic score   --work W --model lm|s2s [--json] [--strip PP]
//   craic report  --work W --by javadoc|category|stats

#include "craic/error.hpp"
#include "craic/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using craic::neural::ModelKind;

struct Flags {
  std::string configPath;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> work;
  std::vector<std::string> sets;
  bool force = false;

  std::optional<std::string> input;
  std::optional<std::string> compression;
  std::optional<std::size_t> maxTokens;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> hidden;
  std::optional<std::size_t> minCount;
  std::optional<double> strip;
};

craic::CommonArgs resolve(const Flags& f) {
  craic::CommonArgs args;
  auto& cfg = args.config;
  if (!f.configPath.empty()) cfg.loadFile(f.configPath);
  for (const auto& s : f.sets) cfg.setAssignment(s);
  if (f.seed) cfg.seed = *f.seed;
  if (f.work) cfg.work = *f.work;
  if (f.input) cfg.input = *f.input;
  if (f.compression) cfg.set("compression", *f.compression);
  if (f.maxTokens) cfg.maxTokens = *f.maxTokens;
  if (f.epochs) cfg.set("max_epochs", std::to_string(*f.epochs));
  if (f.hidden) cfg.set("hidden_size", std::to_string(*f.hidden));
  if (f.minCount) cfg.minCount = *f.minCount;
  if (f.strip) cfg.stripThreshold = *f.strip;
  args.force = f.force;
  return args;
}

ModelKind modelKind(const std::string& name) { return craic::neural::parseModelKind(name); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comment redundancy analysis for Java: mine method/comment pairs, train comment models, "
               "rank comment sentences by perplexity."};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.configPath, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--work", f.work, "work directory holding stage artifacts");
  app.add_option("--set", f.sets, "override a config key (key=value); repeatable");
  app.add_flag("--force", f.force, "run even when input artifacts look stale");

  auto* extract = app.add_subcommand("extract", "mine commented methods from a Java source tree");
  extract->add_option("--input", f.input, "Java file, directory tree, or manifest listing one path per line");

  auto* prep = app.add_subcommand("prep", "split pairs, compress methods, build vocabularies");
  prep->add_option("--compression", f.compression, "signature | begin-end | identifier");
  prep->add_option("--max-tokens", f.maxTokens, "method token budget L");

  std::string model = "s2s";
  bool resume = false;
  auto* train = app.add_subcommand("train", "train the language model or the sequence-to-sequence model");
  train->add_option("--model", model, "lm | s2s")->required();
  train->add_option("--epochs", f.epochs, "maximum epochs");
  train->add_option("--hidden", f.hidden, "hidden size K");
  train->add_flag("--resume", resume, "continue from the existing checkpoint");

  craic::ScoreArgs scoreArgs;
  std::string scoreModel = "s2s";
  auto* score = app.add_subcommand("score", "score and rank comment sentences");
  score->add_option("--model", scoreModel, "lm | s2s");
  score->add_option("--split", scoreArgs.split, "train | valid | test | all");
  score->add_flag("--json", scoreArgs.json, "also write ranked JSON lines");
  score->add_option("--strip", f.strip, "write sources without sentences below this perplexity");

  std::string by = "javadoc";
  std::string reportModel = "s2s";
  std::string labels;
  auto* report = app.add_subcommand("report", "aggregate reports over scored sentences or the corpus");
  report->add_option("--by", by, "javadoc | category | stats");
  report->add_option("--model", reportModel, "lm | s2s");
  report->add_option("--labels", labels, "TSV of pair_id and category")->check(CLI::ExistingFile);
  report->add_option("--min-count", f.minCount, "minimum sentences per javadoc tag");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto args = resolve(f);
    if (extract->parsed()) {
      craic::cmdExtract(args, std::cout);
    } else if (prep->parsed()) {
      craic::cmdPrep(args, std::cout);
    } else if (train->parsed()) {
      craic::cmdTrain(args, {modelKind(model), resume}, std::cout);
    } else if (score->parsed()) {
      scoreArgs.kind = modelKind(scoreModel);
      craic::cmdScore(args, scoreArgs, std::cout);
    } else if (report->parsed()) {
      craic::cmdReport(args, {craic::parseReportBy(by), modelKind(reportModel), labels}, std::cout);
    }
  } catch (const craic::Error& e) {
    std::cerr << "error: " << craic::errorCodeName(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << craic::errorCodeName(craic::ErrorCode::IoError) << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
