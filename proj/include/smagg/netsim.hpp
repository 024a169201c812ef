#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smagg/adversary.hpp"
#include "smagg/entities.hpp"
#include "smagg/scenario_io.hpp"

namespace smagg {

struct FrameVerdict {
  std::uint32_t frame = 0;
  std::uint64_t timestamp = 0;
  bool attacked = false;  // a message carrying this frame was altered in flight
  bool accepted = false;
  std::optional<ErrorCode> reason;  // set when rejected
  std::int64_t recovered = 0;       // raw units, meaningful when accepted
  std::int64_t truth = 0;

  friend bool operator==(const FrameVerdict&, const FrameVerdict&) = default;
};

struct RunReport {
  std::uint32_t frames_total = 0;
  std::uint32_t frames_attacked = 0;
  std::uint32_t frames_detected = 0;              // attacked and rejected
  std::uint32_t frames_corrupted_undetected = 0;  // attacked and accepted
  std::uint32_t frames_collateral_rejected = 0;   // untouched, declined with its pair
  std::uint32_t frames_silent_corruption = 0;     // accepted with a wrong sum
  std::uint32_t messages_sm_da = 0;
  std::uint32_t messages_da_cc = 0;
  std::map<std::string, std::uint32_t> rejections;  // by reason
  std::vector<FrameVerdict> frames;

  double detection_rate() const {
    return frames_attacked == 0 ? 0.0 : static_cast<double>(frames_detected) / frames_attacked;
  }

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// One epoch of the protocol: registration over the (assumed secure) setup
/// channel, then every frame through meter -> aggregator -> center with the
/// configured attackers on the public links. Single-threaded and fully
/// determined by the config.
class Simulation {
 public:
  Simulation(ScenarioConfig config, TraceTable trace);

  RunReport run();

  const Channel& channel(Link link) const { return link == Link::SmToDa ? sm_da_ : da_cc_; }
  const ScenarioConfig& config() const { return config_; }
  const TraceTable& trace() const { return trace_; }

 private:
  void run_low(std::vector<SmartMeter>& meters, DataAggregator& da, ControlCenter& cc, RunReport& report);
  void run_high(std::vector<SmartMeter>& meters, DataAggregator& da, ControlCenter& cc, RunReport& report);
  // Feeds the frame's meter messages to the aggregator and forwards the
  // result; empty when the aggregator rejected it or it never arrived.
  std::optional<ProtocolMessage> aggregate_frame(DataAggregator& da, std::optional<ErrorCode>& failure);
  void tally(RunReport& report) const;

  ScenarioConfig config_;
  TraceTable trace_;
  Channel sm_da_{Link::SmToDa};
  Channel da_cc_{Link::DaToCc};
};

/// Loads the trace and runs one epoch. Throws ConfigInvalid.
RunReport run_epoch(const ScenarioConfig& config);
RunReport run_epoch(const ScenarioConfig& config, const TraceTable& trace);

struct LeakageVerdict {
  std::size_t payloads = 0;
  std::size_t distinct = 0;
  std::size_t collisions = 0;
  bool passed = true;
};

/// Repeated-plaintext probe over what an eavesdropper saw on a link: passes
/// when no two captured payloads are equal.
LeakageVerdict eavesdrop_probe(const Channel& channel);

}  // namespace smagg
