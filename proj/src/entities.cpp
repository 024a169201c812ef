#include "smagg/entities.hpp"

#include <random>
#include <string>

#include "smagg/hash.hpp"

namespace smagg {

namespace {

class KeyMaterial {
 public:
  explicit KeyMaterial(std::uint64_t seed) : rng_(seed) {}

  std::vector<std::uint8_t> bytes(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng_() >> 56);
    return out;
  }

  SeedBytes seed() {
    SeedBytes out;
    for (auto& b : out) b = static_cast<std::uint8_t>(rng_() >> 56);
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t payload_value(const ProtocolMessage& msg) {
  return load_be64(std::span<const std::uint8_t, 8>(msg.payload.data(), 8));
}

std::string frame_text(std::uint32_t got, std::uint32_t want) {
  return "frame " + std::to_string(got) + ", expected " + std::to_string(want);
}

}  // namespace

Deployment register_deployment(const EpochConfig& epoch, std::uint64_t seed) {
  epoch.validate();
  KeyMaterial source(seed);
  const Registry registry = build_registry(epoch.n_registered);
  const WatermarkKey watermark_key(source.bytes(digest_size(epoch.hash_alg)));
  const R2Seed r2{source.seed()};
  const std::size_t aes_bytes = static_cast<std::size_t>(epoch.aes_bits) / 8;

  Deployment out{{}, {{}, r2}, {registry, {}, r2, watermark_key}};
  out.meters.reserve(registry.effective_n());
  for (const MeterId& meter : registry.meters()) {
    AesKey aes_key(source.bytes(aes_bytes), epoch.aes_bits);
    R1Seed r1{source.seed()};
    R3Seed r3{source.seed()};
    while (r3.bytes == r1.bytes || r3.bytes == r2.bytes) r3.bytes = source.seed();
    out.aggregator.meters.emplace(meter.index, DaMeterSecrets{aes_key, r1});
    out.center.r3.emplace(meter.index, r3);
    out.meters.push_back(SmSecrets{meter, std::move(aes_key), r1, r3, watermark_key});
  }
  return out;
}

// --- smart meter -----------------------------------------------------------

SmartMeter::SmartMeter(SmSecrets secrets, const EpochConfig& epoch)
    : meter_(secrets.meter),
      cipher_(secrets.aes_key),
      r1_(secrets.r1),
      r3_(secrets.r3),
      schedule_(generate_watermark(secrets.watermark_key, epoch.timestamps, epoch.hash_alg, epoch.m)),
      mode_(epoch.mode),
      m_(epoch.m) {}

void SmartMeter::check_reading(const MeterReading& d, std::uint32_t frame) const {
  if (d.meter.index != meter_.index) {
    throw Error(ErrorCode::Precondition, "reading belongs to meter " + std::to_string(d.meter.index));
  }
  if (d.frame.j != frame || frame > m_) {
    throw Error(ErrorCode::Precondition, "reading for " + frame_text(d.frame.j, frame));
  }
  if (meter_.is_dummy && d.raw != 0) throw Error(ErrorCode::Precondition, "dummy meter reads zero");
  if (d.raw >= kRawBound) throw Error(ErrorCode::Overflow, "reading exceeds the raw bound");
}

ProtocolMessage SmartMeter::seal(std::int64_t watermarked, FrameIndex frame) const {
  const std::uint64_t masked =
      add_mask(static_cast<std::uint64_t>(watermarked), r3_mask(r3_, meter_, frame, mode_));
  const CipherBlock sealed =
      xor_layer(cipher_.encrypt(block_encode(masked)), r1_mask(r1_, meter_, frame, mode_));
  return ProtocolMessage{kWireVersion, mode_, meter_.index, frame.j,
                         {sealed.bytes.begin(), sealed.bytes.end()}};
}

ProtocolMessage SmartMeter::step_low(const MeterReading& d) {
  if (mode_ != Mode::LowFrequency) throw Error(ErrorCode::Precondition, "meter runs high-frequency");
  check_reading(d, next_frame_);
  const FrameIndex frame{next_frame_};
  const std::int64_t watermarked = rls_embed(static_cast<std::int64_t>(d.raw), schedule_.bit(frame));
  ++next_frame_;
  return seal(watermarked, frame);
}

std::pair<ProtocolMessage, ProtocolMessage> SmartMeter::step_high(const MeterReading& d1,
                                                                  const MeterReading& d2) {
  if (mode_ != Mode::HighFrequency) throw Error(ErrorCode::Precondition, "meter runs low-frequency");
  check_reading(d1, next_frame_);
  check_reading(d2, next_frame_ + 1);
  const FrameIndex first{next_frame_};
  const FrameIndex second{next_frame_ + 1};
  const FramePair embedded = rde_embed(static_cast<std::int64_t>(d1.raw),
                                       static_cast<std::int64_t>(d2.raw), schedule_.bit(second));
  next_frame_ += 2;
  return {seal(embedded.first, first), seal(embedded.second, second)};
}

// --- data aggregator -------------------------------------------------------

DataAggregator::DataAggregator(DaSecrets secrets, const EpochConfig& epoch, bool check_freshness)
    : r2_(secrets.r2), mode_(epoch.mode), m_(epoch.m), check_freshness_(check_freshness) {
  for (auto& [index, s] : secrets.meters) meters_.emplace(index, MeterChannel{AesCipher(s.aes_key), s.r1});
}

ProtocolMessage DataAggregator::step(std::span<const ProtocolMessage> messages) {
  const FrameIndex frame{next_frame_};
  if (frame.j > m_) throw Error(ErrorCode::Precondition, "epoch already complete");
  ++next_frame_;

  std::map<std::uint32_t, const ProtocolMessage*> by_sender;
  for (const ProtocolMessage& msg : messages) {
    if (check_freshness_ && msg.frame != frame.j) {
      throw Error(ErrorCode::FrameMismatch, "meter " + std::to_string(msg.sender) + " sent " +
                                                frame_text(msg.frame, frame.j));
    }
    if (!meters_.contains(msg.sender)) {
      throw Error(ErrorCode::TamperSuspected, "unregistered sender " + std::to_string(msg.sender));
    }
    if (msg.payload.size() != kMeterPayloadSize || msg.mode != mode_ || msg.version != kWireVersion) {
      throw Error(ErrorCode::TamperSuspected, "malformed message from " + std::to_string(msg.sender));
    }
    if (!by_sender.emplace(msg.sender, &msg).second) {
      throw Error(ErrorCode::TamperSuspected, "duplicate message from " + std::to_string(msg.sender));
    }
  }

  std::uint64_t q = 0;
  for (const auto& [index, channel] : meters_) {
    auto it = by_sender.find(index);
    if (it == by_sender.end()) {
      throw Error(ErrorCode::MissingMeter, "no message from meter " + std::to_string(index));
    }
    CipherBlock block;
    std::copy(it->second->payload.begin(), it->second->payload.end(), block.bytes.begin());
    const MeterId meter{index, false};
    const CipherBlock ciphertext = xor_layer(block, r1_mask(channel.r1, meter, frame, mode_));
    try {
      q += block_decode(channel.cipher.decrypt(ciphertext));
    } catch (const Error& e) {
      throw Error(ErrorCode::TamperSuspected, "meter " + std::to_string(index) + ": " + e.what());
    }
  }

  ProtocolMessage out{kWireVersion, mode_, kAggregatorId, frame.j, std::vector<std::uint8_t>(8)};
  store_be64(q ^ r2_mask(r2_, frame, mode_), std::span<std::uint8_t, 8>(out.payload.data(), 8));
  return out;
}

// --- control center --------------------------------------------------------

ControlCenter::ControlCenter(CcSecrets secrets, const EpochConfig& epoch, bool check_freshness)
    : registry_(std::move(secrets.registry)),
      r3_(std::move(secrets.r3)),
      r2_(secrets.r2),
      schedule_(generate_watermark(secrets.watermark_key, epoch.timestamps, epoch.hash_alg, epoch.m)),
      mode_(epoch.mode),
      m_(epoch.m),
      scale_(epoch.scale),
      check_freshness_(check_freshness) {}

void ControlCenter::check_message(const ProtocolMessage& msg, FrameIndex frame) const {
  if (check_freshness_ && msg.frame != frame.j) {
    throw Error(ErrorCode::FrameMismatch, frame_text(msg.frame, frame.j));
  }
  if (msg.payload.size() != kAggregatePayloadSize || msg.sender != kAggregatorId) {
    throw Error(ErrorCode::TamperSuspected, "malformed aggregate message");
  }
}

std::int64_t ControlCenter::unmask(const ProtocolMessage& msg, FrameIndex frame) const {
  std::uint64_t v = payload_value(msg) ^ r2_mask(r2_, frame, mode_);
  for (const MeterId& meter : registry_.meters()) {
    v = remove_mask(v, r3_mask(r3_.at(meter.index), meter, frame, mode_));
  }
  return static_cast<std::int64_t>(v);
}

Aggregate ControlCenter::make_aggregate(FrameIndex frame, std::int64_t raw) const {
  return {frame, raw, fixed_point_decode(raw, scale_)};
}

Aggregate ControlCenter::step_low(const ProtocolMessage& msg) {
  if (mode_ != Mode::LowFrequency) throw Error(ErrorCode::Precondition, "center runs high-frequency");
  const FrameIndex frame{next_frame_};
  if (frame.j > m_) throw Error(ErrorCode::Precondition, "epoch already complete");
  ++next_frame_;
  check_message(msg, frame);
  const std::int64_t v = unmask(msg, frame);
  return make_aggregate(frame, rls_verify_extract(v, schedule_.bit(frame), registry_.effective_n()));
}

std::pair<Aggregate, Aggregate> ControlCenter::step_high(const ProtocolMessage& first,
                                                         const ProtocolMessage& second) {
  if (mode_ != Mode::HighFrequency) throw Error(ErrorCode::Precondition, "center runs low-frequency");
  const FrameIndex f1{next_frame_};
  const FrameIndex f2{next_frame_ + 1};
  if (f2.j > m_) throw Error(ErrorCode::Precondition, "epoch already complete");
  next_frame_ += 2;
  check_message(first, f1);
  check_message(second, f2);
  const FramePair sums = rde_verify_extract(unmask(first, f1), unmask(second, f2), schedule_.bit(f2),
                                            registry_.effective_n());
  return {make_aggregate(f1, sums.first), make_aggregate(f2, sums.second)};
}

void ControlCenter::decline(std::uint32_t frames) { next_frame_ += frames; }

}  // namespace smagg
