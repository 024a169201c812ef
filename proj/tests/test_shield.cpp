#include <gtest/gtest.h>

#include <random>

#include "smagg/aes.hpp"
#include "smagg/shield.hpp"
#include "test_support.hpp"

namespace smagg {
namespace {

using testing::block_from_hex;
using testing::hex;

CipherBlock random_block(std::mt19937_64& rng) {
  CipherBlock b;
  for (auto& byte : b.bytes) byte = static_cast<std::uint8_t>(rng());
  return b;
}

AesKey random_key(std::mt19937_64& rng, AesBits bits) {
  std::vector<std::uint8_t> k(static_cast<std::size_t>(bits) / 8);
  for (auto& byte : k) byte = static_cast<std::uint8_t>(rng());
  return AesKey(k, bits);
}

TEST(AesTest, Fips197KnownAnswers) {
  const CipherBlock plain = block_from_hex("00112233445566778899aabbccddeeff");
  struct Vector {
    const char* key;
    AesBits bits;
    const char* cipher;
  };
  const Vector vectors[] = {
      {"000102030405060708090a0b0c0d0e0f", AesBits::Aes128, "69c4e0d86a7b0430d8cdb78070b4c55a"},
      {"000102030405060708090a0b0c0d0e0f1011121314151617", AesBits::Aes192,
       "dda97ca4864cdfe06eaf70a0ec0d7191"},
      {"000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f", AesBits::Aes256,
       "8ea2b7ca516745bfeafc49904b496089"},
  };
  for (const Vector& v : vectors) {
    const AesKey key(hex(v.key), v.bits);
    EXPECT_EQ(aes_encrypt(plain, key), block_from_hex(v.cipher));
    EXPECT_EQ(aes_decrypt(block_from_hex(v.cipher), key), plain);
  }
  const AesKey key(hex("2b7e151628aed2a6abf7158809cf4f3c"), AesBits::Aes128);
  EXPECT_EQ(aes_encrypt(block_from_hex("3243f6a8885a308d313198a2e0370734"), key),
            block_from_hex("3925841d02dc09fbdc118597196a0b32"));
}

TEST(AesTest, AgreesWithOpenSsl) {
  std::mt19937_64 rng(7);
  for (AesBits bits : {AesBits::Aes128, AesBits::Aes192, AesBits::Aes256}) {
    for (int i = 0; i < 200; ++i) {
      const AesKey key = random_key(rng, bits);
      const CipherBlock b = random_block(rng);
      const AesCipher cipher(key);
      const CipherBlock c = cipher.encrypt(b);
      EXPECT_EQ(c, testing::openssl_aes(b, key, true));
      EXPECT_EQ(cipher.decrypt(c), b);
    }
  }
}

TEST(AesTest, RoundsFollowKeySize) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(AesCipher(random_key(rng, AesBits::Aes128)).rounds(), 10);
  EXPECT_EQ(AesCipher(random_key(rng, AesBits::Aes192)).rounds(), 12);
  EXPECT_EQ(AesCipher(random_key(rng, AesBits::Aes256)).rounds(), 14);
}

TEST(AesTest, DifferentKeysDifferentCiphertexts) {
  std::mt19937_64 rng(3);
  const CipherBlock b = random_block(rng);
  const AesKey k1 = random_key(rng, AesBits::Aes128);
  const AesKey k2 = random_key(rng, AesBits::Aes128);
  EXPECT_NE(aes_encrypt(b, k1), aes_encrypt(b, k2));
}

TEST(AesTest, KeyLengthMustMatchBits) {
  EXPECT_THROW(AesKey(std::vector<std::uint8_t>(16), AesBits::Aes256), Error);
  EXPECT_THROW(AesKey(std::vector<std::uint8_t>(15), AesBits::Aes128), Error);
}

TEST(MaskTest, MatchesReferenceDerivation) {
  // Frozen from hashlib: SHA-256(seed || tag || be32(meter) || be32(frame)).
  R3Seed seed;
  for (std::size_t i = 0; i < 32; ++i) seed.bytes[i] = static_cast<std::uint8_t>(i);
  const MeterId meter{1, false};
  const std::uint64_t f1 = r3_mask(seed, meter, {1}, Mode::LowFrequency);
  const std::uint64_t f2 = r3_mask(seed, meter, {2}, Mode::LowFrequency);
  EXPECT_EQ(f1, 0x6ed33c5c25266061ULL);
  EXPECT_EQ(f2, 0x564db1a46c7d97aeULL);
  EXPECT_NE(f1, f2);

  R1Seed r1;
  r1.bytes = seed.bytes;
  EXPECT_EQ(r1_mask(r1, meter, {2}, Mode::LowFrequency), block_from_hex("003ff91ddf41b9345216ed14850ce494"));
}

TEST(MaskTest, WidthContract) {
  SeedBytes seed{};
  seed[0] = 9;
  const auto wide = mask_value(StreamTag::R1, seed, 1, {1}, MaskWidth::Bits128);
  const auto narrow = mask_value(StreamTag::R3, seed, 1, {1}, MaskWidth::Bits64);
  EXPECT_EQ(wide.size(), 16u);
  for (std::size_t i = 8; i < 16; ++i) EXPECT_EQ(narrow[i], 0);
  EXPECT_THROW(mask_value(StreamTag::R3, seed, 1, {1}, MaskWidth::Bits128), Error);
  EXPECT_EQ(mask_value(StreamTag::R2, seed, 0, {4}, MaskWidth::Bits64),
            mask_value(StreamTag::R2, seed, 0, {4}, MaskWidth::Bits64));
}

TEST(MaskTest, StreamsAreDomainSeparated) {
  SeedBytes seed{};
  EXPECT_NE(mask_value(StreamTag::R2, seed, 1, {1}, MaskWidth::Bits64),
            mask_value(StreamTag::R3, seed, 1, {1}, MaskWidth::Bits64));
  EXPECT_NE(mask_value(StreamTag::R3, seed, 1, {1}, MaskWidth::Bits64),
            mask_value(StreamTag::R3, seed, 2, {1}, MaskWidth::Bits64));
}

TEST(MaskTest, Cadence) {
  for (std::uint32_t j = 1; j <= 10; ++j) {
    EXPECT_EQ(draw_frame(StreamTag::R1, Mode::LowFrequency, {j}).j, j);
    EXPECT_EQ(draw_frame(StreamTag::R3, Mode::HighFrequency, {j}).j, j);
    const std::uint32_t even = j % 2 ? j + 1 : j;
    EXPECT_EQ(draw_frame(StreamTag::R1, Mode::HighFrequency, {j}).j, even);
    EXPECT_EQ(draw_frame(StreamTag::R2, Mode::HighFrequency, {j}).j, even);
  }
  R2Seed seed{};
  EXPECT_EQ(r2_mask(seed, {3}, Mode::HighFrequency), r2_mask(seed, {4}, Mode::HighFrequency));
  EXPECT_NE(r2_mask(seed, {3}, Mode::LowFrequency), r2_mask(seed, {4}, Mode::LowFrequency));
}

TEST(MaskTest, WrongSeedDisagrees) {
  // Holders of the seed agree; anyone guessing a seed does not.
  std::mt19937_64 rng(11);
  int agreements = 0;
  for (int i = 0; i < 2000; ++i) {
    R3Seed real, guess;
    for (auto& b : real.bytes) b = static_cast<std::uint8_t>(rng());
    for (auto& b : guess.bytes) b = static_cast<std::uint8_t>(rng());
    const MeterId meter{static_cast<std::uint32_t>(1 + i % 7), false};
    const FrameIndex frame{static_cast<std::uint32_t>(1 + i % 48)};
    R3Seed copy = real;
    EXPECT_EQ(r3_mask(real, meter, frame, Mode::LowFrequency), r3_mask(copy, meter, frame, Mode::LowFrequency));
    agreements += r3_mask(real, meter, frame, Mode::LowFrequency) == r3_mask(guess, meter, frame, Mode::LowFrequency);
  }
  EXPECT_EQ(agreements, 0);
}

TEST(AddMaskTest, Examples) {
  EXPECT_EQ(add_mask(5, 100), 105u);
  EXPECT_EQ(add_mask(5, ~std::uint64_t{0}), 4u);
  EXPECT_EQ(add_mask(0, 0), 0u);
}

TEST(AddMaskTest, GroupActionProperties) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t v = rng(), r = rng(), s = rng();
    EXPECT_EQ(remove_mask(add_mask(v, r), r), v);
    EXPECT_EQ(add_mask(add_mask(v, r), s), add_mask(v, r + s));
    EXPECT_EQ((remove_mask(add_mask(v, r), r)) & 1, v & 1);
  }
}

TEST(BlockCodecTest, Layout) {
  EXPECT_EQ(block_encode(5), block_from_hex("00000000000000000000000000000005"));
  const std::uint64_t max = ~std::uint64_t{0};
  EXPECT_EQ(block_decode(block_encode(max)), max);
  CipherBlock bad = block_encode(1);
  bad.bytes[0] = 0x01;
  try {
    block_decode(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PaddingViolation);
  }
}

TEST(XorLayerTest, IdentityAndInvolution) {
  std::mt19937_64 rng(8);
  const CipherBlock b = random_block(rng);
  const CipherBlock r = random_block(rng);
  EXPECT_EQ(xor_layer(b, CipherBlock{}), b);
  EXPECT_EQ(xor_layer(xor_layer(b, r), r), b);
  EXPECT_EQ(xor_layer(CipherBlock{}, r), r);
}

TEST(ConfidentialityPipelineTest, InvertibleAndFixedSize) {
  std::mt19937_64 rng(31);
  for (AesBits bits : {AesBits::Aes128, AesBits::Aes192, AesBits::Aes256}) {
    for (int i = 0; i < 500; ++i) {
      const AesKey key = random_key(rng, bits);
      const AesCipher cipher(key);
      const CipherBlock r1 = random_block(rng);
      const std::uint64_t v = i < 4 ? std::uint64_t{1} << (i * 20) : rng();
      const CipherBlock wire = xor_layer(cipher.encrypt(block_encode(v)), r1);
      static_assert(sizeof(wire.bytes) == 16);
      EXPECT_EQ(block_decode(cipher.decrypt(xor_layer(wire, r1))), v);
    }
  }
}

}  // namespace
}  // namespace smagg
