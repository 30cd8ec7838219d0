#include "craic/config.hpp"

#include "craic/error.hpp"

#include <charconv>
#include <fstream>
#include <set>

namespace craic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t toUnsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorCode::ConfigInvalid, key + " expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

double toReal(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw Error(ErrorCode::ConfigInvalid, key + " expects a number, got '" + v + "'");
  }
  return out;
}

const std::set<std::string> kIntModelKeys = {"hidden_size", "layers", "batch_size", "tbptt_steps",
                                             "max_epochs"};
const std::set<std::string> kRealModelKeys = {"learning_rate", "decay_factor", "dropout_keep",
                                              "dropout_drop", "clip_norm", "init_scale", "forget_bias"};

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") {
    input = value;
  } else if (key == "work") {
    work = value;
  } else if (key == "compression") {
    try {
      scheme = parseScheme(value);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigInvalid, e.what());
    }
  } else if (key == "max_tokens") {
    maxTokens = toUnsigned(key, value);
  } else if (key == "comment_max_tokens") {
    commentMaxTokens = toUnsigned(key, value);
  } else if (key == "vocab_method") {
    vocabMethod = toUnsigned(key, value);
  } else if (key == "vocab_comment") {
    vocabComment = toUnsigned(key, value);
  } else if (key == "train_size") {
    trainSize = toUnsigned(key, value);
  } else if (key == "valid_size") {
    validSize = toUnsigned(key, value);
  } else if (key == "test_size") {
    testSize = toUnsigned(key, value);
  } else if (key == "seed") {
    seed = toUnsigned(key, value);
  } else if (key == "profile") {
    if (value != "desk" && value != "full") {
      throw Error(ErrorCode::ConfigInvalid, "profile must be desk or full, got '" + value + "'");
    }
    profile = value;
  } else if (key == "min_count") {
    minCount = toUnsigned(key, value);
  } else if (key == "strip_threshold") {
    if (value.empty() || value == "off") {
      stripThreshold.reset();
    } else {
      stripThreshold = toReal(key, value);
    }
  } else if (kIntModelKeys.count(key)) {
    toUnsigned(key, value);
    model[key] = value;
  } else if (kRealModelKeys.count(key)) {
    toReal(key, value);
    if (key == "dropout_keep") model.erase("dropout_drop");
    if (key == "dropout_drop") model.erase("dropout_keep");
    model[key] = value;
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
  }
}

void PipelineConfig::setAssignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::ConfigInvalid, "expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void PipelineConfig::loadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read config file " + path.string());
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    try {
      setAssignment(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigInvalid, path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
}

neural::ModelConfig PipelineConfig::modelConfig(neural::ModelKind kind) const {
  auto c = profile == "full" ? neural::ModelConfig::full(kind) : neural::ModelConfig::desk(kind);
  c.seed = seed;
  c.vocabSizeMethod = static_cast<int>(vocabMethod);
  c.vocabSizeComment = static_cast<int>(vocabComment);
  for (const auto& [key, value] : model) {
    if (key == "hidden_size") c.hiddenSize = static_cast<int>(toUnsigned(key, value));
    if (key == "layers") c.layers = static_cast<int>(toUnsigned(key, value));
    if (key == "batch_size") c.batchSize = static_cast<int>(toUnsigned(key, value));
    if (key == "tbptt_steps") c.tbpttSteps = static_cast<int>(toUnsigned(key, value));
    if (key == "max_epochs") c.maxEpochs = static_cast<int>(toUnsigned(key, value));
    if (key == "learning_rate") c.learningRate = toReal(key, value);
    if (key == "decay_factor") c.decayFactor = toReal(key, value);
    if (key == "dropout_keep") c.dropoutKeep = toReal(key, value);
    if (key == "dropout_drop") c.setDropProbability(toReal(key, value));
    if (key == "clip_norm") c.clipNorm = toReal(key, value);
    if (key == "init_scale") c.initScale = toReal(key, value);
    if (key == "forget_bias") c.forgetBias = toReal(key, value);
  }
  c.validate();
  return c;
}

nlohmann::ordered_json PipelineConfig::prepSettings() const {
  nlohmann::ordered_json j;
  j["compression"] = std::string(schemeName(scheme));
  j["max_tokens"] = maxTokens;
  j["comment_max_tokens"] = commentMaxTokens;
  j["vocab_method"] = vocabMethod;
  j["vocab_comment"] = vocabComment;
  j["train_size"] = trainSize;
  j["valid_size"] = validSize;
  j["test_size"] = testSize;
  return j;
}

}  // namespace craic
