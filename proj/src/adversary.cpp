#include "smagg/adversary.hpp"

#include <string>

#include "smagg/errors.hpp"
#include "smagg/shield.hpp"

namespace smagg {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::BitFlip: return "bitflip";
    case AttackKind::ReplayPrevious: return "replay";
    case AttackKind::Drop: return "drop";
    case AttackKind::InjectForged: return "inject";
    case AttackKind::ModifyAdd: return "modify_add";
  }
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view text) {
  if (text == "bitflip") return AttackKind::BitFlip;
  if (text == "replay") return AttackKind::ReplayPrevious;
  if (text == "drop") return AttackKind::Drop;
  if (text == "inject") return AttackKind::InjectForged;
  if (text == "modify_add") return AttackKind::ModifyAdd;
  throw Error(ErrorCode::ConfigInvalid, "unknown attack '" + std::string(text) + "'");
}

std::string_view to_string(Link link) { return link == Link::SmToDa ? "sm_da" : "da_cc"; }

Link parse_link(std::string_view text) {
  if (text == "sm_da") return Link::SmToDa;
  if (text == "da_cc") return Link::DaToCc;
  throw Error(ErrorCode::ConfigInvalid, "unknown link '" + std::string(text) + "'");
}

Adversary::Adversary(AdversaryScript script) : script_(std::move(script)), rng_(script_.rng_seed) {
  if (script_.frames.every == 0 || script_.frames.offset >= script_.frames.every) {
    throw Error(ErrorCode::ConfigInvalid, "frame filter needs every >= 1 and offset < every");
  }
  if (script_.frames.probability < 0.0 || script_.frames.probability > 1.0) {
    throw Error(ErrorCode::ConfigInvalid, "attack probability must lie in [0, 1]");
  }
  const std::size_t size = payload_size(script_.link);
  if (script_.bit && *script_.bit >= size * 8) {
    throw Error(ErrorCode::ConfigInvalid, "bit index outside the payload");
  }
  if (!script_.forged_payload.empty() && script_.forged_payload.size() != size) {
    throw Error(ErrorCode::ConfigInvalid, "forged payload has the wrong size for the link");
  }
}

bool Adversary::targets(const ProtocolMessage& msg) {
  if (script_.meter && msg.sender != *script_.meter) return false;
  if (msg.frame == 0 || (msg.frame - 1) % script_.frames.every != script_.frames.offset) return false;
  if (script_.frames.probability >= 1.0) return true;
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return u < script_.frames.probability;
}

std::optional<ProtocolMessage> Adversary::intercept(const ProtocolMessage& msg) {
  const bool hit = targets(msg);
  ProtocolMessage out = msg;
  std::optional<ProtocolMessage> earlier;
  if (auto it = previous_.find(msg.sender); it != previous_.end()) earlier = it->second;
  previous_[msg.sender] = msg;
  if (!hit) return out;

  auto& payload = out.payload;
  switch (script_.action) {
    case AttackKind::Drop:
      return std::nullopt;
    case AttackKind::ReplayPrevious:
      if (earlier) out = *earlier;
      break;
    case AttackKind::BitFlip: {
      const std::uint32_t bit =
          script_.bit ? *script_.bit : static_cast<std::uint32_t>(rng_() % (payload.size() * 8));
      payload[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
      break;
    }
    case AttackKind::ModifyAdd: {
      const std::uint64_t delta = script_.delta ? *script_.delta : rng_();
      auto tail = std::span<std::uint8_t, 8>(payload.data() + payload.size() - 8, 8);
      store_be64(load_be64(tail) + delta, tail);
      break;
    }
    case AttackKind::InjectForged:
      if (!script_.forged_payload.empty()) {
        payload = script_.forged_payload;
      } else {
        for (auto& b : payload) b = static_cast<std::uint8_t>(rng_() >> 56);
      }
      break;
  }
  return out;
}

void Channel::send(const ProtocolMessage& msg) {
  transcript_.push_back(msg);
  std::optional<ProtocolMessage> current = msg;
  for (Adversary& adversary : adversaries_) {
    if (!current) break;
    current = adversary.intercept(*current);
  }
  if (!current || *current != msg) altered_frames_.insert(msg.frame);
  if (current) queue_.push_back(std::move(*current));
}

std::vector<ProtocolMessage> Channel::drain() {
  std::vector<ProtocolMessage> out(std::make_move_iterator(queue_.begin()),
                                   std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

}  // namespace smagg
