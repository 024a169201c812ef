#include "smagg/netsim.hpp"

#include <set>

namespace smagg {

Simulation::Simulation(ScenarioConfig config, TraceTable trace)
    : config_(std::move(config)), trace_(std::move(trace)) {
  config_.epoch.timestamps = trace_.timestamps();
  config_.validate();
  if (trace_.n_registered() != config_.epoch.n_registered || trace_.m() != config_.epoch.m ||
      trace_.scale() != config_.epoch.scale) {
    throw Error(ErrorCode::ConfigInvalid, "trace shape does not match the epoch");
  }
  for (const AdversaryScript& script : config_.adversaries) {
    (script.link == Link::SmToDa ? sm_da_ : da_cc_).attach(script);
  }
}

std::optional<ProtocolMessage> Simulation::aggregate_frame(DataAggregator& da,
                                                           std::optional<ErrorCode>& failure) {
  const std::vector<ProtocolMessage> delivered = sm_da_.drain();
  try {
    ProtocolMessage q = da.step(delivered);
    da_cc_.send(q);
  } catch (const Error& e) {
    failure = e.code();
    return std::nullopt;
  }
  std::vector<ProtocolMessage> forwarded = da_cc_.drain();
  if (forwarded.empty()) {
    failure = ErrorCode::MissingMessage;
    return std::nullopt;
  }
  return std::move(forwarded.front());
}

void Simulation::run_low(std::vector<SmartMeter>& meters, DataAggregator& da, ControlCenter& cc,
                         RunReport& report) {
  for (std::uint32_t j = 1; j <= config_.epoch.m; ++j) {
    for (SmartMeter& sm : meters) {
      sm_da_.send(sm.step_low({trace_.reading(sm.id().index, j), sm.id(), {j}}));
    }
    FrameVerdict& verdict = report.frames[j - 1];
    std::optional<ErrorCode> failure;
    auto q = aggregate_frame(da, failure);
    if (!q) {
      verdict.reason = failure;
      cc.decline(1);
      continue;
    }
    try {
      verdict.recovered = cc.step_low(*q).raw;
      verdict.accepted = true;
    } catch (const Error& e) {
      verdict.reason = e.code();
    }
  }
}

void Simulation::run_high(std::vector<SmartMeter>& meters, DataAggregator& da, ControlCenter& cc,
                          RunReport& report) {
  for (std::uint32_t b = 2; b <= config_.epoch.m; b += 2) {
    const std::uint32_t a = b - 1;
    std::vector<ProtocolMessage> second;
    second.reserve(meters.size());
    for (SmartMeter& sm : meters) {
      const MeterId id = sm.id();
      auto [first, later] =
          sm.step_high({trace_.reading(id.index, a), id, {a}}, {trace_.reading(id.index, b), id, {b}});
      sm_da_.send(first);
      second.push_back(std::move(later));
    }
    FrameVerdict& va = report.frames[a - 1];
    FrameVerdict& vb = report.frames[b - 1];
    auto qa = aggregate_frame(da, va.reason);
    for (const ProtocolMessage& msg : second) sm_da_.send(msg);
    auto qb = aggregate_frame(da, vb.reason);

    if (!qa || !qb) {
      cc.decline(2);
      if (!va.reason) va.reason = ErrorCode::PairDeclined;
      if (!vb.reason) vb.reason = ErrorCode::PairDeclined;
      continue;
    }
    try {
      const auto [da_sum, db_sum] = cc.step_high(*qa, *qb);
      va.recovered = da_sum.raw;
      vb.recovered = db_sum.raw;
      va.accepted = vb.accepted = true;
    } catch (const Error& e) {
      va.reason = vb.reason = e.code();
    }
  }
}

void Simulation::tally(RunReport& report) const {
  report.frames_total = config_.epoch.m;
  for (FrameVerdict& v : report.frames) {
    v.attacked = sm_da_.altered(v.frame) || da_cc_.altered(v.frame);
    if (v.attacked) ++report.frames_attacked;
    if (v.attacked && !v.accepted) ++report.frames_detected;
    if (v.attacked && v.accepted) ++report.frames_corrupted_undetected;
    if (!v.attacked && !v.accepted) ++report.frames_collateral_rejected;
    if (v.accepted && v.recovered != v.truth) ++report.frames_silent_corruption;
    if (v.reason) ++report.rejections[std::string(to_string(*v.reason))];
  }
  report.messages_sm_da = static_cast<std::uint32_t>(sm_da_.transcript().size());
  report.messages_da_cc = static_cast<std::uint32_t>(da_cc_.transcript().size());
}

RunReport Simulation::run() {
  if (!sm_da_.transcript().empty()) throw Error(ErrorCode::Precondition, "simulation already ran");
  const EpochConfig& epoch = config_.epoch;
  Deployment deployment = register_deployment(epoch, config_.master_seed);

  std::vector<SmartMeter> meters;
  meters.reserve(deployment.meters.size());
  for (SmSecrets& secrets : deployment.meters) meters.emplace_back(std::move(secrets), epoch);
  DataAggregator da(std::move(deployment.aggregator), epoch, config_.check_freshness);
  ControlCenter cc(std::move(deployment.center), epoch, config_.check_freshness);

  RunReport report;
  report.frames.resize(epoch.m);
  for (std::uint32_t j = 1; j <= epoch.m; ++j) {
    FrameVerdict& v = report.frames[j - 1];
    v.frame = j;
    v.timestamp = epoch.timestamps[j - 1];
    v.truth = trace_.truth(j);
  }
  if (epoch.mode == Mode::LowFrequency) {
    run_low(meters, da, cc, report);
  } else {
    run_high(meters, da, cc, report);
  }
  tally(report);
  return report;
}

RunReport run_epoch(const ScenarioConfig& config, const TraceTable& trace) {
  return Simulation(config, trace).run();
}

RunReport run_epoch(const ScenarioConfig& config) {
  config.validate();
  return run_epoch(config, resolve_trace(config));
}

LeakageVerdict eavesdrop_probe(const Channel& channel) {
  std::set<std::vector<std::uint8_t>> seen;
  LeakageVerdict verdict;
  for (const ProtocolMessage& msg : channel.transcript()) {
    ++verdict.payloads;
    seen.insert(msg.payload);
  }
  verdict.distinct = seen.size();
  verdict.collisions = verdict.payloads - verdict.distinct;
  verdict.passed = verdict.collisions == 0;
  return verdict;
}

}  // namespace smagg
