#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smagg/errors.hpp"

namespace smagg {

// Per-reading raw bound. With at most kMaxMeters meters every sum formed in
// the pipeline (including the x2 of the embedding) stays below 2^62.
inline constexpr std::uint64_t kRawBound = std::uint64_t{1} << 40;
inline constexpr std::uint32_t kMaxMeters = std::uint32_t{1} << 20;

enum class Mode : std::uint8_t { LowFrequency = 0, HighFrequency = 1 };
enum class HashAlg { Sha224, Sha256, Sha512 };
enum class AesBits : std::uint16_t { Aes128 = 128, Aes192 = 192, Aes256 = 256 };

std::string_view to_string(Mode mode);
std::string_view to_string(HashAlg alg);
Mode parse_mode(std::string_view text);
HashAlg parse_hash_alg(std::string_view text);
AesBits parse_aes_bits(std::string_view text);

struct MeterId {
  std::uint32_t index = 0;  // 1-based
  bool is_dummy = false;

  friend bool operator==(const MeterId&, const MeterId&) = default;
};

struct FrameIndex {
  std::uint32_t j = 0;  // 1-based

  friend auto operator<=>(const FrameIndex&, const FrameIndex&) = default;
};

struct EpochConfig {
  Mode mode = Mode::LowFrequency;
  std::uint32_t n_registered = 1;
  std::uint32_t m = 1;
  HashAlg hash_alg = HashAlg::Sha256;
  AesBits aes_bits = AesBits::Aes128;
  std::int64_t scale = 1000;
  // Seconds since epoch start, one per frame.
  std::vector<std::uint64_t> timestamps;

  /// Throws Error(ConfigInvalid) naming the first violated constraint.
  void validate() const;
};

/// Evenly spaced frame timestamps starting at 0.
std::vector<std::uint64_t> cadence_timestamps(std::uint32_t m, std::uint64_t interval_seconds);

struct MeterReading {
  std::uint64_t raw = 0;  // energy x scale
  MeterId meter;
  FrameIndex frame;
};

class Registry {
 public:
  Registry() = default;
  explicit Registry(std::uint32_t n_registered);

  const std::vector<MeterId>& meters() const { return meters_; }
  std::uint32_t n_registered() const { return n_registered_; }
  std::uint32_t effective_n() const { return static_cast<std::uint32_t>(meters_.size()); }
  bool has_dummy() const { return effective_n() != n_registered_; }
  const MeterId& meter(std::uint32_t index) const;

 private:
  std::uint32_t n_registered_ = 0;
  std::vector<MeterId> meters_;
};

/// Adds a zero-consumption dummy meter when n_registered is even so the
/// effective meter count is always odd.
Registry build_registry(std::uint32_t n_registered);

/// round-half-up(value * scale). Throws NegativeReading or Overflow.
std::uint64_t fixed_point_encode(double value, std::int64_t scale);

/// Exact decimal-string variant used for trace ingestion ("12.345").
std::uint64_t fixed_point_encode(std::string_view decimal, std::int64_t scale);

double fixed_point_decode(std::int64_t raw, std::int64_t scale);

}  // namespace smagg
