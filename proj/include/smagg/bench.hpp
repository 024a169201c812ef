#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smagg/core.hpp"
#include "smagg/scenario_io.hpp"

namespace smagg {

inline constexpr std::uint32_t kMinRepetitions = 1000;
inline constexpr std::uint32_t kMinTrials = 1000;

struct TimingStats {
  double mean_ms = 0.0;  // mean after trimming 1% from each tail
  double std_ms = 0.0;
  std::uint32_t samples = 0;
};

/// Trimmed mean and standard deviation of per-iteration samples (ms).
TimingStats summarize(std::vector<double> samples_ms, double trim_fraction = 0.01);

struct BenchOptions {
  std::vector<HashAlg> hashes{HashAlg::Sha224, HashAlg::Sha256, HashAlg::Sha512};
  std::vector<AesBits> aes{AesBits::Aes128, AesBits::Aes192, AesBits::Aes256};
  std::uint32_t repetitions = kMinRepetitions;
  std::uint32_t frames = 1024;  // watermark length timed by the initialization row
};

struct InitRow {
  HashAlg hash;
  TimingStats time;
};

struct IterRow {
  AesBits aes;
  TimingStats rls;  // one frame
  TimingStats rde;  // one frame, i.e. half of a pair
};

struct BenchReport {
  std::uint32_t repetitions = 0;
  std::uint32_t frames = 0;
  std::string host;
  std::vector<InitRow> init;
  std::vector<IterRow> iter;
};

/// Initialization: watermark generation over `frames` timestamps plus one
/// meter's key and seed setup, per hash. Iteration: one meter's phase-1 work
/// (embed, mask, encrypt, XOR) per AES size and scheme. Configurations are
/// interleaved within each repetition so clock drift hits all of them alike.
/// Throws Precondition when repetitions < 1000.
BenchReport run_bench(const BenchOptions& options);

std::string bench_table(const BenchReport& report);
std::string bench_json(const BenchReport& report);
std::string bench_csv(const BenchReport& report);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval at 95%.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials);

struct AttackRow {
  std::string name;
  std::string metric;  // "detection" or "distinct_payloads"
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double rate = 0.0;
  Interval ci;
  double expected = 0.0;
};

/// Runs every adversary class against `base` (its own adversaries are
/// ignored) until each has `trials` attacked frames. Throws Precondition when
/// trials < 1000.
std::vector<AttackRow> attack_eval(const ScenarioConfig& base, std::uint32_t trials);

std::string attack_table(const std::vector<AttackRow>& rows);
std::string attack_json(const std::vector<AttackRow>& rows);
std::string attack_csv(const std::vector<AttackRow>& rows);

}  // namespace smagg
