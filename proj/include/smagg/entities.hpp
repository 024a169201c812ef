#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "smagg/aes.hpp"
#include "smagg/core.hpp"
#include "smagg/shield.hpp"
#include "smagg/watermark.hpp"
#include "smagg/wire.hpp"

namespace smagg {

// Secret material handed out during registration. Each bundle holds exactly
// what its entity is entitled to; the aggregator bundle has no R3 seed and no
// watermark key, the center bundle has no AES key and no R1 seed.

struct SmSecrets {
  MeterId meter;
  AesKey aes_key;
  R1Seed r1;
  R3Seed r3;
  WatermarkKey watermark_key;
};

struct DaMeterSecrets {
  AesKey aes_key;
  R1Seed r1;
};

struct DaSecrets {
  std::map<std::uint32_t, DaMeterSecrets> meters;
  R2Seed r2;
};

struct CcSecrets {
  Registry registry;
  std::map<std::uint32_t, R3Seed> r3;
  R2Seed r2;
  WatermarkKey watermark_key;
};

struct Deployment {
  std::vector<SmSecrets> meters;  // one per registry entry, dummy included
  DaSecrets aggregator;
  CcSecrets center;
};

/// Initialization phase: registry, watermark key, per-meter AES keys and the
/// three seed families, all drawn deterministically from `seed`.
Deployment register_deployment(const EpochConfig& epoch, std::uint64_t seed);

class SmartMeter {
 public:
  SmartMeter(SmSecrets secrets, const EpochConfig& epoch);

  MeterId id() const { return meter_; }
  FrameIndex expected_frame() const { return {next_frame_}; }
  const WatermarkSchedule& schedule() const { return schedule_; }

  /// E' = xor(aes(block(2d + w_j + R3)), R1) for the next frame.
  ProtocolMessage step_low(const MeterReading& d);

  /// Frames 2j-1 and 2j. Both blocks are XORed with the single R1_{2j}.
  std::pair<ProtocolMessage, ProtocolMessage> step_high(const MeterReading& d1, const MeterReading& d2);

 private:
  void check_reading(const MeterReading& d, std::uint32_t frame) const;
  ProtocolMessage seal(std::int64_t watermarked, FrameIndex frame) const;

  MeterId meter_;
  AesCipher cipher_;
  R1Seed r1_;
  R3Seed r3_;
  WatermarkSchedule schedule_;
  Mode mode_;
  std::uint32_t m_;
  std::uint32_t next_frame_ = 1;
};

class DataAggregator {
 public:
  DataAggregator(DaSecrets secrets, const EpochConfig& epoch, bool check_freshness = true);

  FrameIndex expected_frame() const { return {next_frame_}; }

  /// Consumes one frame: strips R1, decrypts, sums the masked readings and
  /// forwards Q' = Q xor R2. Throws MissingMeter, FrameMismatch or
  /// TamperSuspected (malformed or undecodable block).
  ProtocolMessage step(std::span<const ProtocolMessage> messages);

 private:
  struct MeterChannel {
    AesCipher cipher;
    R1Seed r1;
  };

  std::map<std::uint32_t, MeterChannel> meters_;
  R2Seed r2_;
  Mode mode_;
  std::uint32_t m_;
  bool check_freshness_;
  std::uint32_t next_frame_ = 1;
};

struct Aggregate {
  FrameIndex frame;
  std::int64_t raw = 0;  // scaled units
  double energy = 0.0;
};

class ControlCenter {
 public:
  ControlCenter(CcSecrets secrets, const EpochConfig& epoch, bool check_freshness = true);

  FrameIndex expected_frame() const { return {next_frame_}; }
  const WatermarkSchedule& schedule() const { return schedule_; }
  const Registry& registry() const { return registry_; }

  /// V = (Q' xor R2 - sum R3) mod 2^64, read as signed.
  std::int64_t unmask(const ProtocolMessage& msg, FrameIndex frame) const;

  Aggregate step_low(const ProtocolMessage& msg);
  std::pair<Aggregate, Aggregate> step_high(const ProtocolMessage& first, const ProtocolMessage& second);

  /// Skips frames that never arrived.
  void decline(std::uint32_t frames);

 private:
  void check_message(const ProtocolMessage& msg, FrameIndex frame) const;
  Aggregate make_aggregate(FrameIndex frame, std::int64_t raw) const;

  Registry registry_;
  std::map<std::uint32_t, R3Seed> r3_;
  R2Seed r2_;
  WatermarkSchedule schedule_;
  Mode mode_;
  std::uint32_t m_;
  std::int64_t scale_;
  bool check_freshness_;
  std::uint32_t next_frame_ = 1;
};

}  // namespace smagg
