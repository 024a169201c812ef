#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "smagg/aes.hpp"
#include "smagg/core.hpp"

namespace smagg {

// Mask streams and who shares them:
//   R1  meter <-> aggregator      128-bit, XORed onto the ciphertext block
//   R2  aggregator <-> center      64-bit, XORed onto the frame aggregate
//   R3  meter <-> center           64-bit, added mod 2^64 to the reading
enum class StreamTag : std::uint8_t { R1 = 1, R2 = 2, R3 = 3 };

using SeedBytes = std::array<std::uint8_t, 32>;

// One distinct type per stream, so an entity that should not hold a stream's
// seed has no way to spell it.
template <StreamTag Tag>
struct StreamSeed {
  SeedBytes bytes{};

  friend bool operator==(const StreamSeed&, const StreamSeed&) = default;
};

using R1Seed = StreamSeed<StreamTag::R1>;
using R2Seed = StreamSeed<StreamTag::R2>;
using R3Seed = StreamSeed<StreamTag::R3>;

/// R2 belongs to the aggregator, not a meter; it is derived under sender 0.
inline constexpr std::uint32_t kAggregatorId = 0;

enum class MaskWidth : std::uint16_t { Bits64 = 64, Bits128 = 128 };

/// SHA-256(seed || tag || be32(owner) || be32(frame)) truncated to the leading
/// `width` bits. Returned in a 16-byte buffer; 64-bit masks fill the first 8.
/// Width 128 is reserved for R1.
std::array<std::uint8_t, 16> mask_value(StreamTag tag, const SeedBytes& seed, std::uint32_t owner,
                                        FrameIndex frame, MaskWidth width);

/// Frame whose draw a stream uses at `frame`. Low-frequency draws every
/// frame; high-frequency draws R3 every frame and R1/R2 once per pair, at
/// the even frame.
FrameIndex draw_frame(StreamTag tag, Mode mode, FrameIndex frame);

CipherBlock r1_mask(const R1Seed& seed, MeterId meter, FrameIndex frame, Mode mode);
std::uint64_t r2_mask(const R2Seed& seed, FrameIndex frame, Mode mode);
std::uint64_t r3_mask(const R3Seed& seed, MeterId meter, FrameIndex frame, Mode mode);

constexpr std::uint64_t add_mask(std::uint64_t v, std::uint64_t r) { return v + r; }
constexpr std::uint64_t remove_mask(std::uint64_t v, std::uint64_t r) { return v - r; }

/// 8 zero bytes followed by the value big-endian.
CipherBlock block_encode(std::uint64_t v);

/// Throws PaddingViolation if the leading 8 bytes are not zero.
std::uint64_t block_decode(const CipherBlock& block);

CipherBlock xor_layer(const CipherBlock& block, const CipherBlock& mask);

std::uint64_t load_be64(std::span<const std::uint8_t, 8> bytes);
void store_be64(std::uint64_t v, std::span<std::uint8_t, 8> out);

}  // namespace smagg
