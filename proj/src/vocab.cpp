#include "craic/vocab.hpp"

#include "craic/error.hpp"
#include "craic/hash.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace craic {

namespace {
constexpr std::array<std::string_view, kReservedCount> kReserved{"<pad>", "<bos>", "<eos>", "<unk>"};

bool isReserved(std::string_view t) {
  return std::find(kReserved.begin(), kReserved.end(), t) != kReserved.end();
}
}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw Error(ErrorCode::FormatError, "duplicate vocabulary entry '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::fromCounts(const std::unordered_map<std::string, std::uint64_t>& counts,
                                  std::size_t maxSize) {
  if (maxSize < kReservedCount + 1) {
    throw Error(ErrorCode::ConfigInvalid, "vocabulary size must be at least 5");
  }
  if (counts.empty()) throw Error(ErrorCode::EmptyStream, "cannot build a vocabulary from no tokens");
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t keep = std::min(ranked.size(), maxSize - kReservedCount);
  std::vector<std::string> tokens(kReserved.begin(), kReserved.end());
  for (std::size_t i = 0; i < keep; ++i) tokens.push_back(std::move(ranked[i].first));
  return Vocabulary(std::move(tokens));
}

Vocabulary Vocabulary::build(std::span<const std::string> stream, std::size_t maxSize) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& t : stream) {
    if (!isReserved(t)) ++counts[t];
  }
  return fromCounts(counts, maxSize);
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& sequences,
                             std::size_t maxSize) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& seq : sequences) {
    for (const auto& t : seq) {
      if (!isReserved(t)) ++counts[t];
    }
  }
  return fromCounts(counts, maxSize);
}

TokenId Vocabulary::idOf(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::tokenOf(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error(ErrorCode::InvalidArgument, "token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

bool Vocabulary::contains(std::string_view token) const { return ids_.count(std::string(token)) > 0; }

std::vector<TokenId> Vocabulary::encode(std::span<const std::string> tokens, bool addBosEos) const {
  std::vector<TokenId> out;
  out.reserve(tokens.size() + 2);
  if (addBosEos) out.push_back(kBos);
  for (const auto& t : tokens) out.push_back(idOf(t));
  if (addBosEos) out.push_back(kEos);
  return out;
}

std::vector<std::string> Vocabulary::decode(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(tokenOf(id));
  return out;
}

std::string Vocabulary::serialize() const {
  std::string out = "craic-vocab v1 " + std::to_string(tokens_.size()) + "\n";
  for (const auto& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version;
  std::size_t size = 0;
  if (!(hs >> magic >> version >> size) || magic != "craic-vocab" || version != "v1") {
    throw Error(ErrorCode::FormatError, "bad vocabulary header '" + header + "'");
  }
  std::vector<std::string> tokens;
  tokens.reserve(size);
  std::string line;
  while (tokens.size() < size && std::getline(in, line)) tokens.push_back(line);
  if (tokens.size() != size) throw Error(ErrorCode::FormatError, "vocabulary file is truncated");
  for (std::size_t i = 0; i < kReservedCount; ++i) {
    if (tokens[i] != kReserved[i]) throw Error(ErrorCode::FormatError, "reserved ids are not in place");
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "cannot read vocabulary " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << serialize();
}

std::string Vocabulary::fingerprint() const { return hashBytes(serialize()); }

}  // namespace craic
