#include "craic/neural/checkpoint.hpp"

#include "craic/error.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace craic::neural {

namespace {

constexpr const char* kMagic = "CRAIC1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void putFloat(std::string& out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

float getFloat(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

void writeBlocks(std::string& out, const ModelParams<float>& params, const std::string& prefix) {
  params.forEachBlock([&](BlockRef<const float> b) {
    out += "block " + prefix + b.name + " " + std::to_string(b.rows) + " " + std::to_string(b.cols) + "\n";
    for (Eigen::Index r = 0; r < b.rows; ++r) {
      for (Eigen::Index c = 0; c < b.cols; ++c) putFloat(out, b.data[c * b.rows + r]);
    }
  });
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::FormatError, "checkpoint: " + what); }

long toLong(const std::string& key, const std::string& v) {
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad("bad integer for " + key + ": '" + v + "'");
  return out;
}

double toDouble(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) bad("bad number for " + key + ": '" + v + "'");
  return out;
}

}  // namespace

std::string Checkpoint::serialize() const {
  const auto& c = config;
  std::string out = std::string(kMagic) + "\n";
  auto kv = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  kv("kind", modelKindName(kind()));
  kv("hidden_size", std::to_string(c.hiddenSize));
  kv("layers", std::to_string(c.layers));
  kv("vocab_size_method", std::to_string(c.vocabSizeMethod));
  kv("vocab_size_comment", std::to_string(c.vocabSizeComment));
  kv("learning_rate_initial", fmt(c.learningRate));
  kv("decay_factor", fmt(c.decayFactor));
  kv("batch_size", std::to_string(c.batchSize));
  kv("dropout_keep", fmt(c.dropoutKeep));
  kv("clip_norm", fmt(c.clipNorm));
  kv("tbptt_steps", std::to_string(c.tbpttSteps));
  kv("max_epochs", std::to_string(c.maxEpochs));
  kv("seed", std::to_string(c.seed));
  kv("init_scale", fmt(c.initScale));
  kv("forget_bias", fmt(c.forgetBias));
  kv("vocab_method", vocabMethod);
  kv("vocab_comment", vocabComment);
  kv("epoch", std::to_string(epoch));
  kv("best_epoch", std::to_string(bestEpoch));
  kv("valid_perplexity", fmt(validPerplexity));
  kv("learning_rate", fmt(learningRate));
  for (const auto& [k, v] : extra) kv("x." + k, v);
  out += "end_header\n";
  writeBlocks(out, params, "");
  if (last) writeBlocks(out, *last, "last.");
  return out;
}

Checkpoint Checkpoint::parse(const std::string& bytes) {
  std::size_t pos = 0;
  auto nextLine = [&]() -> std::string {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string::npos) bad("truncated header");
    std::string line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };
  if (nextLine() != kMagic) bad("missing CRAIC1 magic");
  std::map<std::string, std::string> header;
  for (std::string line = nextLine(); line != "end_header"; line = nextLine()) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("malformed header line '" + line + "'");
    header[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = header.find(k);
    if (it == header.end()) bad("missing header field " + k);
    return it->second;
  };

  Checkpoint ck;
  auto& c = ck.config;
  const ModelKind kind = parseModelKind(get("kind"));
  c.hiddenSize = static_cast<int>(toLong("hidden_size", get("hidden_size")));
  c.layers = static_cast<int>(toLong("layers", get("layers")));
  c.vocabSizeMethod = static_cast<int>(toLong("vocab_size_method", get("vocab_size_method")));
  c.vocabSizeComment = static_cast<int>(toLong("vocab_size_comment", get("vocab_size_comment")));
  c.learningRate = toDouble("learning_rate_initial", get("learning_rate_initial"));
  c.decayFactor = toDouble("decay_factor", get("decay_factor"));
  c.batchSize = static_cast<int>(toLong("batch_size", get("batch_size")));
  c.dropoutKeep = toDouble("dropout_keep", get("dropout_keep"));
  c.clipNorm = toDouble("clip_norm", get("clip_norm"));
  c.tbpttSteps = static_cast<int>(toLong("tbptt_steps", get("tbptt_steps")));
  c.maxEpochs = static_cast<int>(toLong("max_epochs", get("max_epochs")));
  c.seed = std::stoull(get("seed"));
  c.initScale = toDouble("init_scale", get("init_scale"));
  c.forgetBias = toDouble("forget_bias", get("forget_bias"));
  ck.vocabMethod = get("vocab_method");
  ck.vocabComment = get("vocab_comment");
  ck.epoch = static_cast<int>(toLong("epoch", get("epoch")));
  ck.bestEpoch = static_cast<int>(toLong("best_epoch", get("best_epoch")));
  ck.validPerplexity = toDouble("valid_perplexity", get("valid_perplexity"));
  ck.learningRate = toDouble("learning_rate", get("learning_rate"));
  for (const auto& [k, v] : header) {
    if (k.rfind("x.", 0) == 0) ck.extra[k.substr(2)] = v;
  }

  ModelShape shape;
  shape.kind = kind;
  shape.hidden = c.hiddenSize;
  shape.layers = c.layers;
  shape.vocabComment = c.vocabSizeComment;
  shape.vocabMethod = kind == ModelKind::Seq2Seq ? c.vocabSizeMethod : 0;
  ck.params = ModelParams<float>::zeros(shape);

  std::map<std::string, BlockRef<float>> slots;
  ck.params.forEachBlock([&](BlockRef<float> b) { slots.emplace(b.name, b); });
  std::map<std::string, bool> filled;
  bool haveLast = false;
  while (pos < bytes.size()) {
    std::istringstream line(nextLine());
    std::string word, name;
    long rows = 0, cols = 0;
    if (!(line >> word >> name >> rows >> cols) || word != "block") bad("malformed block line");
    if (name.rfind("last.", 0) == 0 && !haveLast) {
      haveLast = true;
      ck.last = ModelParams<float>::zeros(shape);
      ck.last->forEachBlock([&](BlockRef<float> b) { slots.emplace("last." + b.name, b); });
    }
    auto it = slots.find(name);
    if (it == slots.end()) bad("unexpected block " + name);
    auto& slot = it->second;
    if (rows != slot.rows || cols != slot.cols) {
      bad("block " + name + " is " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected " +
          std::to_string(slot.rows) + "x" + std::to_string(slot.cols));
    }
    const std::size_t n = static_cast<std::size_t>(rows * cols) * 4;
    if (pos + n > bytes.size()) bad("truncated block " + name);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    for (long r = 0; r < rows; ++r) {
      for (long col = 0; col < cols; ++col) {
        slot.data[col * rows + r] = getFloat(p);
        p += 4;
      }
    }
    pos += n;
    filled[name] = true;
  }
  for (const auto& [name, slot] : slots) {
    if (!filled.count(name)) bad("missing block " + name);
  }
  if (!ck.params.allFinite()) bad("non-finite parameters");
  return ck;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  const auto bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "no checkpoint at " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<ResumePoint> Checkpoint::resumePoint() const {
  if (!last) return std::nullopt;
  ResumePoint r;
  r.params = *last;
  r.best = params;
  r.epoch = epoch;
  r.learningRate = learningRate;
  r.bestValid = bestEpoch > 0 ? validPerplexity : std::numeric_limits<double>::infinity();
  r.bestEpoch = bestEpoch;
  return r;
}

}  // namespace craic::neural
