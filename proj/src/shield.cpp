#include "smagg/shield.hpp"

#include <algorithm>

#include "smagg/hash.hpp"

namespace smagg {

std::uint64_t load_be64(std::span<const std::uint8_t, 8> bytes) {
  std::uint64_t v = 0;
  for (std::uint8_t b : bytes) v = (v << 8) | b;
  return v;
}

void store_be64(std::uint64_t v, std::span<std::uint8_t, 8> out) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
}

std::array<std::uint8_t, 16> mask_value(StreamTag tag, const SeedBytes& seed, std::uint32_t owner,
                                        FrameIndex frame, MaskWidth width) {
  if (width == MaskWidth::Bits128 && tag != StreamTag::R1) {
    throw Error(ErrorCode::Precondition, "128-bit masks are only drawn from R1");
  }
  std::array<std::uint8_t, 32 + 1 + 4 + 4> input{};
  std::copy(seed.begin(), seed.end(), input.begin());
  input[32] = static_cast<std::uint8_t>(tag);
  for (int i = 0; i < 4; ++i) {
    input[33 + i] = static_cast<std::uint8_t>(owner >> (24 - 8 * i));
    input[37 + i] = static_cast<std::uint8_t>(frame.j >> (24 - 8 * i));
  }
  const Digest h = sha2(HashAlg::Sha256, input);
  std::array<std::uint8_t, 16> out{};
  const std::size_t n = width == MaskWidth::Bits128 ? 16 : 8;
  std::copy_n(h.bytes.begin(), n, out.begin());
  return out;
}

FrameIndex draw_frame(StreamTag tag, Mode mode, FrameIndex frame) {
  if (mode == Mode::LowFrequency || tag == StreamTag::R3) return frame;
  return {frame.j % 2 == 0 ? frame.j : frame.j + 1};
}

CipherBlock r1_mask(const R1Seed& seed, MeterId meter, FrameIndex frame, Mode mode) {
  return {mask_value(StreamTag::R1, seed.bytes, meter.index, draw_frame(StreamTag::R1, mode, frame),
                     MaskWidth::Bits128)};
}

std::uint64_t r2_mask(const R2Seed& seed, FrameIndex frame, Mode mode) {
  const auto v = mask_value(StreamTag::R2, seed.bytes, kAggregatorId,
                            draw_frame(StreamTag::R2, mode, frame), MaskWidth::Bits64);
  return load_be64(std::span<const std::uint8_t, 8>(v.data(), 8));
}

std::uint64_t r3_mask(const R3Seed& seed, MeterId meter, FrameIndex frame, Mode mode) {
  const auto v = mask_value(StreamTag::R3, seed.bytes, meter.index,
                            draw_frame(StreamTag::R3, mode, frame), MaskWidth::Bits64);
  return load_be64(std::span<const std::uint8_t, 8>(v.data(), 8));
}

CipherBlock block_encode(std::uint64_t v) {
  CipherBlock b;
  store_be64(v, std::span<std::uint8_t, 8>(b.bytes.data() + 8, 8));
  return b;
}

std::uint64_t block_decode(const CipherBlock& block) {
  for (int i = 0; i < 8; ++i) {
    if (block.bytes[i] != 0) {
      throw Error(ErrorCode::PaddingViolation, "block padding is not zero");
    }
  }
  return load_be64(std::span<const std::uint8_t, 8>(block.bytes.data() + 8, 8));
}

CipherBlock xor_layer(const CipherBlock& block, const CipherBlock& mask) {
  CipherBlock out;
  for (std::size_t i = 0; i < 16; ++i) out.bytes[i] = block.bytes[i] ^ mask.bytes[i];
  return out;
}

}  // namespace smagg
