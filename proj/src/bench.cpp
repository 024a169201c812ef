#include "smagg/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"
#include "smagg/entities.hpp"
#include "smagg/hash.hpp"
#include "smagg/netsim.hpp"

namespace smagg {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

std::string host_descriptor() {
  utsname info{};
  std::string host = "unknown";
  if (uname(&info) == 0) host = std::string(info.sysname) + " " + info.release + " " + info.machine;
#if defined(__clang__)
  host += ", clang " __clang_version__;
#elif defined(__GNUC__)
  host += ", gcc " __VERSION__;
#endif
  return host;
}

// Fixed material so every repetition processes identical inputs.
struct InitWorkload {
  std::vector<std::uint8_t> watermark_key;
  std::vector<std::uint64_t> timestamps;
};

void initialize_once(const InitWorkload& w, HashAlg hash, volatile std::uint8_t& sink) {
  const WatermarkKey key(w.watermark_key);
  const WatermarkSchedule schedule =
      generate_watermark(key, w.timestamps, hash, static_cast<std::uint32_t>(w.timestamps.size()));
  std::mt19937_64 rng(7);
  std::vector<std::uint8_t> aes_bytes(16);
  for (auto& b : aes_bytes) b = static_cast<std::uint8_t>(rng());
  R1Seed r1;
  R3Seed r3;
  for (auto& b : r1.bytes) b = static_cast<std::uint8_t>(rng());
  for (auto& b : r3.bytes) b = static_cast<std::uint8_t>(rng());
  const AesCipher cipher(AesKey(aes_bytes, AesBits::Aes128));
  sink = sink + schedule.bits().back() + r1.bytes[0] + r3.bytes[0] + static_cast<std::uint8_t>(cipher.rounds());
}

SmartMeter bench_meter(Mode mode, AesBits bits) {
  EpochConfig epoch;
  epoch.mode = mode;
  epoch.n_registered = 1;
  epoch.m = 2;
  epoch.aes_bits = bits;
  epoch.timestamps = cadence_timestamps(2, mode == Mode::LowFrequency ? kHourlyInterval : kMinuteInterval);
  Deployment d = register_deployment(epoch, 11);
  return SmartMeter(std::move(d.meters.front()), epoch);
}

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

TimingStats summarize(std::vector<double> samples, double trim_fraction) {
  TimingStats out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const auto trim = static_cast<std::size_t>(std::floor(samples.size() * trim_fraction));
  const auto first = samples.begin() + static_cast<std::ptrdiff_t>(trim);
  const auto last = samples.end() - static_cast<std::ptrdiff_t>(trim);
  const double n = static_cast<double>(last - first);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) sum += *it;
  out.mean_ms = sum / n;
  double sq = 0.0;
  for (auto it = first; it != last; ++it) sq += (*it - out.mean_ms) * (*it - out.mean_ms);
  out.std_ms = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
  out.samples = static_cast<std::uint32_t>(n);
  return out;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.repetitions < kMinRepetitions) {
    throw Error(ErrorCode::Precondition, "benchmarks need at least 1000 repetitions");
  }
  if (options.frames < 1) throw Error(ErrorCode::Precondition, "benchmarks need at least one frame");

  BenchReport report;
  report.repetitions = options.repetitions;
  report.frames = options.frames;
  report.host = host_descriptor();
  volatile std::uint8_t sink = 0;

  std::vector<InitWorkload> init_work;
  std::vector<std::vector<double>> init_samples(options.hashes.size());
  for (HashAlg hash : options.hashes) {
    std::mt19937_64 rng(3);
    InitWorkload w;
    w.watermark_key.resize(digest_size(hash));
    for (auto& b : w.watermark_key) b = static_cast<std::uint8_t>(rng());
    w.timestamps = cadence_timestamps(options.frames, kMinuteInterval);
    init_work.push_back(std::move(w));
  }

  struct IterSetup {
    SmartMeter rls;
    SmartMeter rde;
  };
  std::vector<IterSetup> iter_work;
  for (AesBits bits : options.aes) {
    iter_work.push_back({bench_meter(Mode::LowFrequency, bits), bench_meter(Mode::HighFrequency, bits)});
  }
  std::vector<std::vector<double>> rls_samples(options.aes.size());
  std::vector<std::vector<double>> rde_samples(options.aes.size());

  const MeterId meter{1, false};
  const MeterReading first{123456, meter, {1}};
  const MeterReading second{123999, meter, {2}};

  // Rotating the start position keeps any first-in-round penalty spread
  // evenly over the configurations.
  const std::size_t n_hash = options.hashes.size();
  for (std::uint32_t rep = 0; rep < options.repetitions; ++rep) {
    for (std::size_t k = 0; k < n_hash; ++k) {
      const std::size_t h = (rep + k) % n_hash;
      initialize_once(init_work[h], options.hashes[h], sink);
      const auto start = Clock::now();
      initialize_once(init_work[h], options.hashes[h], sink);
      init_samples[h].push_back(elapsed_ms(start, Clock::now()));
    }
  }

  const std::size_t n_aes = options.aes.size();
  for (std::uint32_t rep = 0; rep < options.repetitions; ++rep) {
    for (std::size_t k = 0; k < n_aes; ++k) {
      const std::size_t a = (rep + k) % n_aes;
      SmartMeter warm = iter_work[a].rls;
      SmartMeter rls = iter_work[a].rls;
      sink = sink + warm.step_low(first).payload[0];
      auto start = Clock::now();
      const ProtocolMessage msg = rls.step_low(first);
      rls_samples[a].push_back(elapsed_ms(start, Clock::now()));

      SmartMeter warm_pair = iter_work[a].rde;
      SmartMeter rde = iter_work[a].rde;
      sink = sink + warm_pair.step_high(first, second).first.payload[0];
      start = Clock::now();
      const auto pair = rde.step_high(first, second);
      rde_samples[a].push_back(elapsed_ms(start, Clock::now()) / 2.0);
      sink = sink + msg.payload[0] + pair.second.payload[0];
    }
  }

  for (std::size_t h = 0; h < options.hashes.size(); ++h) {
    report.init.push_back({options.hashes[h], summarize(std::move(init_samples[h]))});
  }
  for (std::size_t a = 0; a < options.aes.size(); ++a) {
    report.iter.push_back(
        {options.aes[a], summarize(std::move(rls_samples[a])), summarize(std::move(rde_samples[a]))});
  }
  return report;
}

std::string bench_table(const BenchReport& report) {
  std::ostringstream out;
  out << "Initialization and iteration times (" << report.repetitions << " repetitions, "
      << report.frames << " frames)\n";
  out << "host: " << report.host << "\n\n";
  out << "Initialization time\n";
  out << "  SHA    mean (ms)    std (ms)    ratio\n";
  const double init_base = report.init.empty() ? 1.0 : report.init.front().time.mean_ms;
  for (const InitRow& row : report.init) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-5s  %9s  %10s  %7s\n", to_string(row.hash).substr(3).data(),
                  fmt(row.time.mean_ms).c_str(), fmt(row.time.std_ms).c_str(),
                  fmt(row.time.mean_ms / init_base, 2).c_str());
    out << line;
  }
  out << "\nIteration time for 1 SM (per frame)\n";
  out << "  AES    RLS (ms)     std        RDE (ms)     std        RDE/RLS\n";
  for (const IterRow& row : report.iter) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-5d  %9s  %9s  %9s  %9s  %7s\n", static_cast<int>(row.aes),
                  fmt(row.rls.mean_ms, 5).c_str(), fmt(row.rls.std_ms, 5).c_str(),
                  fmt(row.rde.mean_ms, 5).c_str(), fmt(row.rde.std_ms, 5).c_str(),
                  fmt(row.rde.mean_ms / row.rls.mean_ms, 2).c_str());
    out << line;
  }
  return out.str();
}

namespace {

nlohmann::ordered_json stats_json(const TimingStats& s) {
  nlohmann::ordered_json j;
  j["mean_ms"] = s.mean_ms;
  j["std_ms"] = s.std_ms;
  j["samples"] = s.samples;
  return j;
}

}  // namespace

std::string bench_json(const BenchReport& report) {
  nlohmann::ordered_json j;
  j["repetitions"] = report.repetitions;
  j["frames"] = report.frames;
  j["host"] = report.host;
  auto init = nlohmann::ordered_json::array();
  for (const InitRow& row : report.init) {
    nlohmann::ordered_json r;
    r["hash"] = to_string(row.hash);
    r["time"] = stats_json(row.time);
    init.push_back(std::move(r));
  }
  j["init"] = std::move(init);
  auto iter = nlohmann::ordered_json::array();
  for (const IterRow& row : report.iter) {
    nlohmann::ordered_json r;
    r["aes_bits"] = static_cast<int>(row.aes);
    r["rls"] = stats_json(row.rls);
    r["rde"] = stats_json(row.rde);
    iter.push_back(std::move(r));
  }
  j["iter"] = std::move(iter);
  return j.dump(2) + "\n";
}

std::string bench_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "phase,config,scheme,mean_ms,std_ms,samples\n";
  for (const InitRow& row : report.init) {
    out << "init," << to_string(row.hash) << ",both," << row.time.mean_ms << ',' << row.time.std_ms << ','
        << row.time.samples << '\n';
  }
  for (const IterRow& row : report.iter) {
    const int bits = static_cast<int>(row.aes);
    out << "iter,aes" << bits << ",rls," << row.rls.mean_ms << ',' << row.rls.std_ms << ','
        << row.rls.samples << '\n';
    out << "iter,aes" << bits << ",rde," << row.rde.mean_ms << ',' << row.rde.std_ms << ','
        << row.rde.samples << '\n';
  }
  return out.str();
}

// --- attack evaluation -----------------------------------------------------

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {hits == 0 ? 0.0 : std::max(0.0, centre - half), hits == trials ? 1.0 : std::min(1.0, centre + half)};
}

namespace {

struct AttackClass {
  std::string name;
  AdversaryScript script;
  bool freshness;
  double expected;
};

AttackRow evaluate(const ScenarioConfig& base, const TraceTable& trace, const AttackClass& attack,
                   std::uint32_t trials) {
  AttackRow row{attack.name, "detection", 0, 0, 0.0, {}, attack.expected};
  for (std::uint64_t run = 0; row.trials < trials; ++run) {
    ScenarioConfig config = base;
    config.master_seed = base.master_seed + run;
    config.check_freshness = attack.freshness;
    AdversaryScript script = attack.script;
    script.rng_seed = attack.script.rng_seed * 1000003 + run;
    config.adversaries = {script};
    const RunReport report = run_epoch(config, trace);
    if (report.frames_attacked == 0 && run > 16) {
      throw Error(ErrorCode::ConfigInvalid, attack.name + " never reaches a frame in this scenario");
    }
    for (const FrameVerdict& v : report.frames) {
      if (!v.attacked || row.trials >= trials) continue;
      ++row.trials;
      if (!v.accepted) ++row.hits;
    }
  }
  row.rate = static_cast<double>(row.hits) / static_cast<double>(row.trials);
  row.ci = wilson_interval(row.hits, row.trials);
  return row;
}

AttackRow eavesdrop_row(const ScenarioConfig& base, std::uint32_t trials) {
  // One meter reporting the same reading every frame.
  ScenarioConfig config = base;
  config.adversaries.clear();
  config.epoch.n_registered = 1;
  config.epoch.m = trials + (trials % 2);
  config.epoch.timestamps = cadence_timestamps(config.epoch.m, kMinuteInterval);
  TraceTable trace(1, config.epoch.m, config.epoch.scale, config.epoch.timestamps);
  for (std::uint32_t j = 1; j <= config.epoch.m; ++j) trace.set_reading(1, j, 7);
  Simulation sim(config, trace);
  sim.run();
  const LeakageVerdict verdict = eavesdrop_probe(sim.channel(Link::SmToDa));
  AttackRow row{"eavesdrop (constant reading)", "distinct_payloads", verdict.payloads, verdict.distinct,
                0.0, {}, 1.0};
  row.rate = static_cast<double>(row.hits) / static_cast<double>(row.trials);
  row.ci = wilson_interval(row.hits, row.trials);
  return row;
}

}  // namespace

std::vector<AttackRow> attack_eval(const ScenarioConfig& base, std::uint32_t trials) {
  if (trials < kMinTrials) throw Error(ErrorCode::Precondition, "attack evaluation needs >= 1000 trials");
  base.validate();
  const TraceTable trace = resolve_trace(base);

  // High-frequency runs attack only the even frame of each pair, so a single
  // aggregate of the pair is altered and the per-frame parity law applies.
  FrameFilter frames;
  if (base.epoch.mode == Mode::HighFrequency) frames = {2, 1, 1.0};
  auto script = [&](AttackKind kind, Link link) {
    AdversaryScript s;
    s.action = kind;
    s.link = link;
    s.frames = frames;
    s.rng_seed = 17;
    return s;
  };
  AdversaryScript odd = script(AttackKind::ModifyAdd, Link::DaToCc);
  odd.delta = 1;
  AdversaryScript even = script(AttackKind::ModifyAdd, Link::DaToCc);
  even.delta = 2;

  const std::vector<AttackClass> classes = {
      {"replay sm->da (freshness on)", script(AttackKind::ReplayPrevious, Link::SmToDa), true, 1.0},
      {"replay da->cc (freshness on)", script(AttackKind::ReplayPrevious, Link::DaToCc), true, 1.0},
      {"replay da->cc (freshness off)", script(AttackKind::ReplayPrevious, Link::DaToCc), false, 0.5},
      {"bit flip da->cc (random bit)", script(AttackKind::BitFlip, Link::DaToCc), true, 1.0 / 64.0},
      {"modify_add da->cc (odd delta)", odd, true, 1.0},
      {"modify_add da->cc (even delta)", even, true, 0.0},
      {"modify_add da->cc (uniform delta)", script(AttackKind::ModifyAdd, Link::DaToCc), true, 0.5},
      {"inject sm->da (forged block)", script(AttackKind::InjectForged, Link::SmToDa), true, 1.0},
      {"inject da->cc (forged aggregate)", script(AttackKind::InjectForged, Link::DaToCc), true, 0.5},
      {"drop sm->da", script(AttackKind::Drop, Link::SmToDa), true, 1.0},
  };

  std::vector<AttackRow> rows;
  rows.push_back(eavesdrop_row(base, trials));
  for (const AttackClass& attack : classes) rows.push_back(evaluate(base, trace, attack, trials));
  return rows;
}

std::string attack_table(const std::vector<AttackRow>& rows) {
  std::ostringstream out;
  out << "  attack                               trials   rate     95% CI              expected\n";
  for (const AttackRow& row : rows) {
    char line[200];
    std::snprintf(line, sizeof line, "  %-35s %7llu   %.4f   [%.4f, %.4f]    %.4f\n", row.name.c_str(),
                  static_cast<unsigned long long>(row.trials), row.rate, row.ci.low, row.ci.high,
                  row.expected);
    out << line;
  }
  return out.str();
}

std::string attack_json(const std::vector<AttackRow>& rows) {
  auto j = nlohmann::ordered_json::array();
  for (const AttackRow& row : rows) {
    nlohmann::ordered_json r;
    r["attack"] = row.name;
    r["metric"] = row.metric;
    r["trials"] = row.trials;
    r["hits"] = row.hits;
    r["rate"] = row.rate;
    r["ci_low"] = row.ci.low;
    r["ci_high"] = row.ci.high;
    r["expected"] = row.expected;
    j.push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string attack_csv(const std::vector<AttackRow>& rows) {
  std::ostringstream out;
  out << "attack,metric,trials,hits,rate,ci_low,ci_high,expected\n";
  for (const AttackRow& row : rows) {
    out << '"' << row.name << "\"," << row.metric << ',' << row.trials << ',' << row.hits << ',' << row.rate
        << ',' << row.ci.low << ',' << row.ci.high << ',' << row.expected << '\n';
  }
  return out.str();
}

}  // namespace smagg
