#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace craic {

/// 64-bit FNV-1a. Stable across platforms; used to fingerprint artifacts.
class Fnv1a {
 public:
  void update(std::string_view bytes) noexcept {
    for (unsigned char ch : bytes) {
      state_ ^= ch;
      state_ *= kPrime;
    }
  }
  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t state_ = kOffset;
};

std::string hashBytes(std::string_view bytes);

/// Hex digest of a file's full content; throws MissingArtifact if unreadable.
std::string hashFile(const std::filesystem::path& path);

}  // namespace craic
