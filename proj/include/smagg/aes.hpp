#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "smagg/core.hpp"

namespace smagg {

/// Exactly one 128-bit block. Every payload on the meter link is one of
/// these regardless of the reading it carries.
struct CipherBlock {
  std::array<std::uint8_t, 16> bytes{};

  friend bool operator==(const CipherBlock&, const CipherBlock&) = default;
};

class AesKey {
 public:
  AesKey(std::vector<std::uint8_t> bytes, AesBits bits);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  AesBits bits() const { return bits_; }

 private:
  std::vector<std::uint8_t> bytes_;
  AesBits bits_;
};

/// Single-block AES (FIPS-197) with the key schedule expanded once.
class AesCipher {
 public:
  explicit AesCipher(const AesKey& key);

  CipherBlock encrypt(const CipherBlock& in) const;
  CipherBlock decrypt(const CipherBlock& in) const;

  int rounds() const { return rounds_; }

 private:
  int rounds_ = 0;
  std::array<std::uint8_t, 16 * 15> round_keys_{};
};

CipherBlock aes_encrypt(const CipherBlock& block, const AesKey& key);
CipherBlock aes_decrypt(const CipherBlock& block, const AesKey& key);

}  // namespace smagg
