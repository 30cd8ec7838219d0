#pragma once

#include "craic/compress.hpp"
#include "craic/neural/params.hpp"
#include "craic/neural/train.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace craic {

/// Settings shared by every pipeline stage. Sources, in increasing priority:
/// built-in defaults, a key=value config file, command-line flags.
struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path work = "work";
  CompressionScheme scheme = CompressionScheme::BeginEnd;
  std::size_t maxTokens = kDefaultMaxTokens;
  std::size_t commentMaxTokens = kDefaultMaxTokens;
  std::size_t vocabMethod = 2000;
  std::size_t vocabComment = 2000;
  /// Split sizes; all zero means 80/10/10 of the available pairs.
  std::size_t trainSize = 0;
  std::size_t validSize = 0;
  std::size_t testSize = 0;
  std::uint64_t seed = 1;
  std::string profile = "desk";  // or "full"
  std::size_t minCount = 25;
  std::optional<double> stripThreshold;
  /// Model keys (hidden_size, learning_rate, ...) applied over the profile.
  std::map<std::string, std::string> model;

  /// Sets one key. Throws ConfigInvalid for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Reads `key = value` lines; `#` starts a comment.
  void loadFile(const std::filesystem::path& path);
  /// Parses "key=value".
  void setAssignment(const std::string& assignment);

  neural::ModelConfig modelConfig(neural::ModelKind kind) const;

  /// Settings that determine prep output, recorded in artifact metadata.
  nlohmann::ordered_json prepSettings() const;
};

}  // namespace craic
