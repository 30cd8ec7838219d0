#pragma once

#include "craic/extract.hpp"
#include "craic/textprep.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace craic {

/// One mined method with its full comment, as stored in methods.jsonl.
/// Tokens are kept as text; kinds are recovered by re-lexing each token.
struct MethodRecord {
  MethodFullCommentPair pair;
  std::vector<std::string> fileMethods;

  nlohmann::ordered_json toJson() const;
  static MethodRecord fromJson(const nlohmann::json& j);
};

/// One method/sentence pair after preparation, as stored in corpus.jsonl.
struct CorpusRecord {
  MethodCommentPair pair;
  std::vector<std::string> compressedMethod;
  bool methodTruncated = false;
  std::optional<std::string> split;  // "train", "valid", "test" or unused

  nlohmann::ordered_json toJson() const;
  static CorpusRecord fromJson(const nlohmann::json& j);
};

nlohmann::ordered_json pairToJson(const MethodCommentPair& pair);
MethodCommentPair pairFromJson(const nlohmann::json& j);

/// Calls `fn` for every non-blank line parsed as JSON. Throws FormatError
/// naming the line on malformed input and MissingArtifact for a missing file.
void readJsonl(const std::filesystem::path& path, const std::function<void(const nlohmann::json&)>& fn);

std::vector<MethodRecord> readMethods(const std::filesystem::path& path);
std::vector<CorpusRecord> readCorpus(const std::filesystem::path& path);

/// Writes via a temporary file and rename so readers never see a partial file.
void writeFileAtomic(const std::filesystem::path& path, const std::string& bytes);
std::string readFile(const std::filesystem::path& path);

}  // namespace craic
