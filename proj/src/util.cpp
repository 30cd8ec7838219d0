#include "craic/error.hpp"
#include "craic/hash.hpp"

#include <array>
#include <fstream>

namespace craic {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorCode::UnterminatedComment: return "UnterminatedComment";
    case ErrorCode::BraceImbalance: return "BraceImbalance";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InsufficientPairs: return "InsufficientPairs";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::ZeroLength: return "ZeroLength";
    case ErrorCode::VocabMismatch: return "VocabMismatch";
    case ErrorCode::UnknownPairId: return "UnknownPairId";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::StaleArtifact: return "StaleArtifact";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::LockHeld: return "LockHeld";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string Fnv1a::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  std::uint64_t v = state_;
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string hashBytes(std::string_view bytes) {
  Fnv1a h;
  h.update(bytes);
  return h.hex();
}

std::string hashFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingArtifact, "cannot read " + path.string());
  }
  Fnv1a h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  return h.hex();
}

}  // namespace craic
