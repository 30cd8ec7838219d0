#include "craic/records.hpp"

#include "craic/error.hpp"

#include <fstream>
#include <sstream>

namespace craic {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> texts(const std::vector<SourceToken>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<SourceToken> relex(const std::vector<std::string>& texts, int line) {
  std::vector<SourceToken> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back({t, classifyTokenText(t), line, 1});
  return out;
}

template <typename T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::FormatError, std::string("record lacks field '") + key + "'");
  return it->get<T>();
}

}  // namespace

ordered_json MethodRecord::toJson() const {
  const auto& m = pair.method;
  ordered_json j;
  j["file"] = m.fileId;
  j["line"] = m.startLine;
  j["method_name"] = m.name;
  j["formals"] = m.formals;
  j["signature_tokens"] = texts(m.signatureTokens);
  j["body_tokens"] = texts(m.bodyTokens);
  j["comment_text"] = pair.comment.text;
  j["comment_line"] = pair.comment.startLine;
  j["javadoc_style"] = pair.comment.isJavadocStyle;
  j["file_methods"] = fileMethods;
  return j;
}

MethodRecord MethodRecord::fromJson(const json& j) {
  MethodRecord r;
  auto& m = r.pair.method;
  m.fileId = field<std::string>(j, "file");
  m.startLine = field<int>(j, "line");
  m.name = field<std::string>(j, "method_name");
  m.formals = field<std::vector<std::string>>(j, "formals");
  m.signatureTokens = relex(field<std::vector<std::string>>(j, "signature_tokens"), m.startLine);
  m.bodyTokens = relex(field<std::vector<std::string>>(j, "body_tokens"), m.startLine);
  r.pair.comment.text = field<std::string>(j, "comment_text");
  r.pair.comment.startLine = field<int>(j, "comment_line");
  r.pair.comment.isJavadocStyle = field<bool>(j, "javadoc_style");
  r.fileMethods = field<std::vector<std::string>>(j, "file_methods");
  return r;
}

ordered_json pairToJson(const MethodCommentPair& p) {
  ordered_json j;
  j["pair_id"] = p.pairId;
  j["file"] = p.file;
  j["line"] = p.line;
  j["method_tokens"] = p.methodTokens;
  j["sentence_tokens"] = p.sentence.tokens;
  j["sentence_text"] = p.sentence.text;
  j["javadoc_tag"] = p.sentence.javadocTag ? ordered_json(*p.sentence.javadocTag) : ordered_json();
  return j;
}

MethodCommentPair pairFromJson(const json& j) {
  MethodCommentPair p;
  p.pairId = field<std::string>(j, "pair_id");
  p.file = field<std::string>(j, "file");
  p.line = field<int>(j, "line");
  p.methodTokens = field<std::vector<std::string>>(j, "method_tokens");
  p.sentence.tokens = field<std::vector<std::string>>(j, "sentence_tokens");
  p.sentence.text = field<std::string>(j, "sentence_text");
  p.sentence.sourcePairId = p.pairId;
  const auto& tag = j.at("javadoc_tag");
  if (!tag.is_null()) p.sentence.javadocTag = tag.get<std::string>();
  return p;
}

ordered_json CorpusRecord::toJson() const {
  ordered_json j = pairToJson(pair);
  j["split"] = split ? ordered_json(*split) : ordered_json();
  j["compressed_method_tokens"] = compressedMethod;
  j["method_truncated"] = methodTruncated;
  return j;
}

CorpusRecord CorpusRecord::fromJson(const json& j) {
  CorpusRecord r;
  r.pair = pairFromJson(j);
  const auto& split = j.at("split");
  if (!split.is_null()) r.split = split.get<std::string>();
  r.compressedMethod = field<std::vector<std::string>>(j, "compressed_method_tokens");
  r.methodTruncated = field<bool>(j, "method_truncated");
  return r;
}

void readJsonl(const std::filesystem::path& path, const std::function<void(const json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingArtifact, "missing " + path.string());
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::FormatError, path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    }
    try {
      fn(j);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::FormatError, path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FormatError) throw;
      throw Error(ErrorCode::FormatError, path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
}

std::vector<MethodRecord> readMethods(const std::filesystem::path& path) {
  std::vector<MethodRecord> out;
  readJsonl(path, [&](const json& j) { out.push_back(MethodRecord::fromJson(j)); });
  return out;
}

std::vector<CorpusRecord> readCorpus(const std::filesystem::path& path) {
  std::vector<CorpusRecord> out;
  readJsonl(path, [&](const json& j) { out.push_back(CorpusRecord::fromJson(j)); });
  return out;
}

void writeFileAtomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "missing " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace craic
