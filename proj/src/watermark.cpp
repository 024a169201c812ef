#include "smagg/watermark.hpp"

#include <array>
#include <limits>
#include <string>

#include "smagg/hash.hpp"

namespace smagg {

namespace {

__extension__ typedef __int128 Wide;

constexpr std::int64_t kMaxEmbeddable = (std::numeric_limits<std::int64_t>::max() - 1) / 2;

void check_bit(std::uint8_t w) {
  if (w > 1) throw Error(ErrorCode::Precondition, "watermark bit must be 0 or 1");
}

void check_odd(std::uint32_t effective_n) {
  if (effective_n % 2 == 0) {
    throw Error(ErrorCode::Precondition, "verification needs an odd meter count");
  }
}

void check_embeddable(std::int64_t d) {
  if (d < 0) throw Error(ErrorCode::NegativeReading, std::to_string(d));
  if (d > kMaxEmbeddable) throw Error(ErrorCode::Overflow, std::to_string(d) + " cannot be doubled");
}

}  // namespace

WatermarkKey::WatermarkKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw Error(ErrorCode::Precondition, "watermark key must not be empty");
}

std::uint8_t WatermarkSchedule::bit(FrameIndex frame) const {
  if (frame.j < 1 || frame.j > bits_.size()) {
    throw Error(ErrorCode::Precondition, "frame " + std::to_string(frame.j) + " outside the schedule");
  }
  return bits_[frame.j - 1];
}

WatermarkSchedule generate_watermark(const WatermarkKey& key,
                                     std::span<const std::uint64_t> timestamps,
                                     HashAlg hash_alg, std::uint32_t m) {
  if (m < 1) throw Error(ErrorCode::Precondition, "m must be >= 1");
  if (timestamps.size() != m) throw Error(ErrorCode::Precondition, "need one timestamp per frame");

  const auto key_bytes = key.bytes();
  std::vector<std::uint8_t> input(key_bytes.begin(), key_bytes.end());
  input.resize(key_bytes.size() + 8);

  std::array<std::uint8_t, 64> folded{};
  const std::size_t length = digest_size(hash_alg);
  for (std::uint64_t t : timestamps) {
    for (int b = 0; b < 8; ++b) {
      input[key_bytes.size() + b] = static_cast<std::uint8_t>(t >> (56 - 8 * b));
    }
    const Digest h = sha2(hash_alg, input);
    for (std::size_t i = 0; i < length; ++i) folded[i] ^= h.bytes[i];
  }

  const std::size_t bit_length = length * 8;
  std::vector<std::uint8_t> bits(m);
  for (std::uint32_t j = 0; j < m; ++j) {
    const std::size_t pos = j % bit_length;
    bits[j] = (folded[pos / 8] >> (7 - pos % 8)) & 1;
  }
  return WatermarkSchedule(std::move(bits));
}

std::int64_t rls_embed(std::int64_t d, std::uint8_t w) {
  check_bit(w);
  check_embeddable(d);
  return 2 * d + w;
}

std::int64_t rls_verify_extract(std::int64_t aggregate, std::uint8_t w, std::uint32_t effective_n) {
  check_bit(w);
  check_odd(effective_n);
  if (parity(aggregate) != w) {
    throw Error(ErrorCode::TamperDetected, "aggregate parity does not match the watermark bit");
  }
  // Parity matched, so V - n*w is even. Widen: V may be anything under tampering.
  const Wide shifted = static_cast<Wide>(aggregate) - static_cast<Wide>(effective_n) * w;
  return static_cast<std::int64_t>(shifted / 2);
}

FramePair rde_embed(std::int64_t d1, std::int64_t d2, std::uint8_t w) {
  check_bit(w);
  check_embeddable(d1);
  check_embeddable(d2);
  const std::int64_t avg = d1 + d2;
  const std::int64_t diff = 2 * (d1 - d2);
  return {avg - diff / 2, avg + diff / 2 + w};
}

FramePair rde_verify_extract(std::int64_t v1, std::int64_t v2, std::uint8_t w,
                             std::uint32_t effective_n) {
  check_bit(w);
  check_odd(effective_n);
  const Wide a = v1;
  const Wide b = v2;
  if (parity(static_cast<std::int64_t>((b - a) & 1)) != w) {
    throw Error(ErrorCode::TamperDetected, "tampering detected!");
  }
  const Wide nw = static_cast<Wide>(effective_n) * w;
  // Both numerators are even once the parity check passed.
  const Wide diff = (b - a - nw) / 2;
  const Wide avg = (b + a - nw) / 2;
  const Wide doubled_first = avg + diff;
  const Wide doubled_second = avg - diff;
  if (doubled_first % 2 != 0 || doubled_second % 2 != 0) {
    throw Error(ErrorCode::NonIntegralRecovery, "pair aggregates do not halve exactly");
  }
  return {static_cast<std::int64_t>(doubled_first / 2), static_cast<std::int64_t>(doubled_second / 2)};
}

}  // namespace smagg
