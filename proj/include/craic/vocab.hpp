#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace craic {

using TokenId = std::int32_t;

inline constexpr TokenId kPad = 0;
inline constexpr TokenId kBos = 1;
inline constexpr TokenId kEos = 2;
inline constexpr TokenId kUnk = 3;
inline constexpr std::size_t kReservedCount = 4;

/// Frequency-ranked token <-> id table. Ids 0-3 are <pad>, <bos>, <eos>,
/// <unk>; the rest follow descending corpus frequency with lexicographic
/// tie-breaking. Immutable once built.
class Vocabulary {
 public:
  /// Keeps the maxSize - 4 most frequent tokens. Occurrences of the reserved
  /// strings themselves are not counted.
  static Vocabulary build(std::span<const std::string> stream, std::size_t maxSize);
  static Vocabulary build(const std::vector<std::vector<std::string>>& sequences, std::size_t maxSize);

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  /// Text in the on-disk format: `craic-vocab v1 <size>` then one token per line.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);

  std::size_t size() const noexcept { return tokens_.size(); }
  TokenId idOf(std::string_view token) const;
  const std::string& tokenOf(TokenId id) const;
  bool contains(std::string_view token) const;

  std::vector<TokenId> encode(std::span<const std::string> tokens, bool addBosEos) const;
  std::vector<std::string> decode(std::span<const TokenId> ids) const;

  /// Content hash of serialize(); checkpoints record it.
  std::string fingerprint() const;

 private:
  static Vocabulary fromCounts(const std::unordered_map<std::string, std::uint64_t>& counts,
                               std::size_t maxSize);
  explicit Vocabulary(std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

}  // namespace craic
