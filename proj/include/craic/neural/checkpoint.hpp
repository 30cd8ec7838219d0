#pragma once

#include "craic/neural/params.hpp"
#include "craic/neural/train.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace craic::neural {

/// A trained model plus everything needed to score with it or resume.
///
/// On disk: a text header (`CRAIC1`, then key=value lines through
/// `end_header`) followed by `block <name> <rows> <cols>` lines, each
/// followed by rows*cols row-major little-endian float32 values. The
/// parameters of the final epoch, when kept for resuming, are stored as
/// blocks prefixed with `last.`.
struct Checkpoint {
  ModelConfig config;
  std::string vocabMethod;   // fingerprints; empty for language models
  std::string vocabComment;
  int epoch = 0;             // epochs trained
  int bestEpoch = 0;
  double validPerplexity = 0;
  double learningRate = 0;
  std::map<std::string, std::string> extra;  // pipeline settings such as the scheme
  ModelParams<float> params;
  std::optional<ModelParams<float>> last;

  ModelKind kind() const { return params.kind(); }

  std::string serialize() const;
  static Checkpoint parse(const std::string& bytes);
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  /// Resume state for training further epochs.
  std::optional<ResumePoint> resumePoint() const;
};

}  // namespace craic::neural
