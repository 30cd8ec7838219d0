#include "craic/rng.hpp"
#include "craic/vocab.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace craic {
namespace {

using Strings = std::vector<std::string>;

TEST(Vocab, FrequencyOrder) {
  const Strings stream = {"a", "a", "b"};
  const auto v = Vocabulary::build(stream, 6);
  EXPECT_EQ(v.size(), 6u);
  EXPECT_EQ(v.idOf("a"), 4);
  EXPECT_EQ(v.idOf("b"), 5);
}

TEST(Vocab, ReservedIds) {
  const Strings stream = {"x"};
  const auto v = Vocabulary::build(stream, 6);
  EXPECT_EQ(v.size(), 5u);
  EXPECT_EQ(v.tokenOf(kPad), "<pad>");
  EXPECT_EQ(v.tokenOf(kBos), "<bos>");
  EXPECT_EQ(v.tokenOf(kEos), "<eos>");
  EXPECT_EQ(v.tokenOf(kUnk), "<unk>");
}

TEST(Vocab, ReservedStringsInStreamAreNotCounted) {
  const Strings stream = {"<eos>", "<eos>", "<unk>", "a"};
  const auto v = Vocabulary::build(stream, 10);
  EXPECT_EQ(v.size(), 5u);
  EXPECT_EQ(v.idOf("<eos>"), kEos);
}

TEST(Vocab, TieBrokenLexicographically) {
  const Strings stream = {"b", "a", "b", "a"};
  const auto v = Vocabulary::build(stream, 6);
  EXPECT_EQ(v.idOf("a"), 4);
  EXPECT_EQ(v.idOf("b"), 5);
}

TEST(Vocab, CutoffMapsRareTokensToUnk) {
  Strings stream;
  // token k occurs 30000 - k times, so rank follows k
  for (int k = 0; k < 30000; ++k) {
    const std::string t = "w" + std::to_string(k);
    for (int r = 0; r < (k < 100 ? 3 : 2) + (k < 24996 ? 1 : 0); ++r) stream.push_back(t);
  }
  const auto v = Vocabulary::build(stream, 25000);
  EXPECT_EQ(v.size(), 25000u);
  EXPECT_TRUE(v.contains("w0"));
  EXPECT_TRUE(v.contains("w24995"));
  EXPECT_FALSE(v.contains("w24996"));
  const Strings probe = {"w24996", "w29999"};
  EXPECT_EQ(v.encode(probe, false), (std::vector<TokenId>{kUnk, kUnk}));
}

TEST(Vocab, Encode) {
  const Strings stream = {"a", "a", "b"};
  const auto v = Vocabulary::build(stream, 6);
  EXPECT_EQ(v.encode(Strings{"a", "b"}, true), (std::vector<TokenId>{1, 4, 5, 2}));
  EXPECT_EQ(v.encode(Strings{"z"}, false), std::vector<TokenId>{3});
  EXPECT_EQ(v.encode(Strings{}, true), (std::vector<TokenId>{1, 2}));
}

TEST(Vocab, EmptyStreamThrows) { EXPECT_CRAIC_ERROR(Vocabulary::build(Strings{}, 10), EmptyStream); }

TEST(Vocab, MaxSizeTooSmall) { EXPECT_CRAIC_ERROR(Vocabulary::build(Strings{"a"}, 4), ConfigInvalid); }

TEST(Vocab, PropertiesOnRandomStreams) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    Strings stream;
    const auto n = 1 + rng.below(200);
    for (std::uint64_t i = 0; i < n; ++i) stream.push_back("t" + std::to_string(rng.below(40)));
    const std::size_t maxSize = 5 + rng.below(30);
    const auto v = Vocabulary::build(stream, maxSize);
    const auto again = Vocabulary::build(stream, maxSize);
    ASSERT_EQ(v.serialize(), again.serialize());
    ASSERT_LE(v.size(), maxSize);
    // bijection
    for (std::size_t id = 0; id < v.size(); ++id) {
      ASSERT_EQ(v.idOf(v.tokenOf(static_cast<TokenId>(id))), static_cast<TokenId>(id));
    }
    // frequencies non-increasing along ids
    std::map<std::string, int> freq;
    for (const auto& t : stream) ++freq[t];
    for (std::size_t id = kReservedCount + 1; id < v.size(); ++id) {
      const auto& a = v.tokenOf(static_cast<TokenId>(id - 1));
      const auto& b = v.tokenOf(static_cast<TokenId>(id));
      ASSERT_TRUE(freq[a] > freq[b] || (freq[a] == freq[b] && a < b));
    }
    // ids always in range; round trip when everything is known
    const auto ids = v.encode(stream, true);
    for (auto id : ids) ASSERT_LT(static_cast<std::size_t>(id), v.size());
    Strings known;
    for (const auto& t : stream) {
      if (v.contains(t)) known.push_back(t);
    }
    ASSERT_EQ(v.decode(v.encode(known, false)), known);
  }
}

TEST(Vocab, FileFormat) {
  const Strings stream = {"a", "a", "b"};
  const auto v = Vocabulary::build(stream, 6);
  EXPECT_EQ(v.serialize(), "craic-vocab v1 6\n<pad>\n<bos>\n<eos>\n<unk>\na\nb\n");
  const auto back = Vocabulary::parse(v.serialize());
  EXPECT_EQ(back.serialize(), v.serialize());
  EXPECT_EQ(back.fingerprint(), v.fingerprint());
  testing::TempDir dir("vocab");
  v.save(dir / "v");
  EXPECT_EQ(Vocabulary::load(dir / "v").idOf("b"), 5);
}

TEST(Vocab, MalformedFiles) {
  EXPECT_CRAIC_ERROR(Vocabulary::parse("nonsense\n"), FormatError);
  EXPECT_CRAIC_ERROR(Vocabulary::parse("craic-vocab v1 6\n<pad>\n<bos>\n<eos>\n<unk>\na\n"), FormatError);
  EXPECT_CRAIC_ERROR(Vocabulary::parse("craic-vocab v1 5\n<pad>\n<eos>\n<bos>\n<unk>\na\n"), FormatError);
  EXPECT_CRAIC_ERROR(Vocabulary::parse("craic-vocab v1 6\n<pad>\n<bos>\n<eos>\n<unk>\na\na\n"), FormatError);
}

}  // namespace
}  // namespace craic
