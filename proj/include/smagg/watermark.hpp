#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smagg/core.hpp"

namespace smagg {

/// Shared by every smart meter and the control center; the aggregator never
/// sees it. Length equals the digest length of the configured hash.
class WatermarkKey {
 public:
  explicit WatermarkKey(std::vector<std::uint8_t> bytes);

  std::span<const std::uint8_t> bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

/// One watermark bit per frame of an epoch.
class WatermarkSchedule {
 public:
  WatermarkSchedule() = default;
  explicit WatermarkSchedule(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  std::uint32_t size() const { return static_cast<std::uint32_t>(bits_.size()); }
  std::uint8_t bit(FrameIndex frame) const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const WatermarkSchedule&, const WatermarkSchedule&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// H_j = hash(key || be64(t_j)), W = H_1 ^ ... ^ H_m, w_j = bit (j-1) mod L of W
/// counting from the most significant bit of the first byte.
WatermarkSchedule generate_watermark(const WatermarkKey& key,
                                     std::span<const std::uint64_t> timestamps,
                                     HashAlg hash_alg, std::uint32_t m);

// Low-frequency scheme: shift the reading left and place the bit in the LSB.
std::int64_t rls_embed(std::int64_t d, std::uint8_t w);

/// Checks (V mod 2) == w and returns the aggregate D = (V - n*w) / 2.
/// Throws TamperDetected on a parity mismatch.
std::int64_t rls_verify_extract(std::int64_t aggregate, std::uint8_t w, std::uint32_t effective_n);

struct FramePair {
  std::int64_t first = 0;   // frame 2j-1
  std::int64_t second = 0;  // frame 2j

  friend bool operator==(const FramePair&, const FramePair&) = default;
};

/// Difference-expansion embedding of one bit into a pair of readings.
/// The readings are pre-doubled so average and difference stay integral:
///   avg = d1 + d2, diff = 2(d1 - d2)
///   out = (avg - diff/2, avg + diff/2 + w) = (2*d2, 2*d1 + w)
/// The pair comes out swapped; extraction accounts for it.
FramePair rde_embed(std::int64_t d1, std::int64_t d2, std::uint8_t w);

/// Inverse of rde_embed over the per-frame aggregates of an odd number of
/// meters. Returns (D_{2j-1}, D_{2j}). Throws TamperDetected when
/// (V2 - V1) mod 2 != w, NonIntegralRecovery when a halving is inexact.
FramePair rde_verify_extract(std::int64_t v1, std::int64_t v2, std::uint8_t w,
                             std::uint32_t effective_n);

/// Non-negative residue mod 2.
constexpr std::uint8_t parity(std::int64_t v) { return static_cast<std::uint8_t>(v & 1); }

}  // namespace smagg
