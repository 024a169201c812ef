#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smagg/core.hpp"

namespace smagg {

// Wire layout, all integers big-endian:
//   version(1) | mode(1) | sender(4) | frame(4) | payload
// Payload is 16 bytes (one cipher block) on the meter -> aggregator link and
// 8 bytes (masked aggregate) on the aggregator -> center link.
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kHeaderSize = 10;
inline constexpr std::size_t kMeterPayloadSize = 16;
inline constexpr std::size_t kAggregatePayloadSize = 8;

enum class Link : std::uint8_t { SmToDa, DaToCc };

constexpr std::size_t payload_size(Link link) {
  return link == Link::SmToDa ? kMeterPayloadSize : kAggregatePayloadSize;
}

struct ProtocolMessage {
  std::uint8_t version = kWireVersion;
  Mode mode = Mode::LowFrequency;
  std::uint32_t sender = 0;  // meter index, or 0 for the aggregator
  std::uint32_t frame = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const ProtocolMessage&, const ProtocolMessage&) = default;
};

std::vector<std::uint8_t> serialize(const ProtocolMessage& msg);

/// Throws ParseError on a short/long buffer, unknown version or mode byte.
ProtocolMessage parse_message(std::span<const std::uint8_t> bytes, Link link);

}  // namespace smagg
