#include "smagg/wire.hpp"

#include <string>

namespace smagg {

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_be32(std::span<const std::uint8_t> in) {
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) | (std::uint32_t{in[2]} << 8) |
         std::uint32_t{in[3]};
}

}  // namespace

std::vector<std::uint8_t> serialize(const ProtocolMessage& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + msg.payload.size());
  out.push_back(msg.version);
  out.push_back(static_cast<std::uint8_t>(msg.mode));
  put_be32(out, msg.sender);
  put_be32(out, msg.frame);
  out.insert(out.end(), msg.payload.begin(), msg.payload.end());
  return out;
}

ProtocolMessage parse_message(std::span<const std::uint8_t> bytes, Link link) {
  const std::size_t expected = kHeaderSize + payload_size(link);
  if (bytes.size() != expected) {
    throw Error(ErrorCode::ParseError, "message of " + std::to_string(bytes.size()) +
                                           " bytes, expected " + std::to_string(expected));
  }
  if (bytes[0] != kWireVersion) throw Error(ErrorCode::ParseError, "unknown wire version");
  if (bytes[1] > 1) throw Error(ErrorCode::ParseError, "unknown mode byte");
  ProtocolMessage msg;
  msg.version = bytes[0];
  msg.mode = static_cast<Mode>(bytes[1]);
  msg.sender = get_be32(bytes.subspan(2, 4));
  msg.frame = get_be32(bytes.subspan(6, 4));
  msg.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
  return msg;
}

}  // namespace smagg
