#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string_view>
#include <vector>

#include "smagg/wire.hpp"

namespace smagg {

enum class AttackKind { BitFlip, ReplayPrevious, Drop, InjectForged, ModifyAdd };

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);
std::string_view to_string(Link link);
Link parse_link(std::string_view text);

/// Frame j is targeted when (j - 1) % every == offset, then with the given
/// probability.
struct FrameFilter {
  std::uint32_t every = 1;
  std::uint32_t offset = 0;
  double probability = 1.0;
};

/// One attacker capability applied on a public link. Meters and entities are
/// never touched, only messages in flight.
struct AdversaryScript {
  AttackKind action = AttackKind::ModifyAdd;
  Link link = Link::DaToCc;
  std::optional<std::uint32_t> meter;  // sender filter; empty = every sender
  FrameFilter frames;
  // BitFlip: payload bit counted from the MSB of the first payload byte;
  // empty picks a uniform random bit per message.
  std::optional<std::uint32_t> bit;
  // ModifyAdd: added mod 2^64 to the trailing 8 payload bytes read as a
  // big-endian integer; empty draws a uniform 64-bit delta per message.
  std::optional<std::uint64_t> delta;
  // InjectForged: replacement payload; empty draws random bytes.
  std::vector<std::uint8_t> forged_payload;
  std::uint64_t rng_seed = 1;
};

class Adversary {
 public:
  explicit Adversary(AdversaryScript script);

  const AdversaryScript& script() const { return script_; }

  /// Returns the message to deliver, or nothing if it is dropped.
  std::optional<ProtocolMessage> intercept(const ProtocolMessage& msg);

 private:
  bool targets(const ProtocolMessage& msg);

  AdversaryScript script_;
  std::mt19937_64 rng_;
  std::map<std::uint32_t, ProtocolMessage> previous_;  // last honest message per sender
};

/// FIFO link between two entities with optional attackers in the path.
/// Keeps a transcript of what honest senders put on the wire, which is what
/// a passive eavesdropper gets to see.
class Channel {
 public:
  explicit Channel(Link link) : link_(link) {}

  Link link() const { return link_; }
  void attach(const AdversaryScript& script) { adversaries_.emplace_back(script); }

  void send(const ProtocolMessage& msg);
  std::vector<ProtocolMessage> drain();

  const std::vector<ProtocolMessage>& transcript() const { return transcript_; }
  bool altered(std::uint32_t frame) const { return altered_frames_.contains(frame); }
  const std::set<std::uint32_t>& altered_frames() const { return altered_frames_; }

 private:
  Link link_;
  std::vector<Adversary> adversaries_;
  std::deque<ProtocolMessage> queue_;
  std::vector<ProtocolMessage> transcript_;
  std::set<std::uint32_t> altered_frames_;
};

}  // namespace smagg
