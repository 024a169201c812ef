#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smagg/adversary.hpp"
#include "smagg/core.hpp"

namespace smagg {

inline constexpr std::uint64_t kHourlyInterval = 3600;
inline constexpr std::uint64_t kMinuteInterval = 60;

/// Bounded synthetic load: per-meter base level, a daily sinusoid and
/// multiplicative noise, clamped to [0, max_raw].
struct SyntheticParams {
  std::uint64_t max_raw = 0;
  std::uint64_t interval_seconds = kHourlyInterval;
  double noise = 0.25;

  /// Hourly readings of up to 5 kWh (expressed in Wh, times scale).
  static SyntheticParams low_frequency(std::int64_t scale);
  /// One-minute readings of up to 150 Wh.
  static SyntheticParams high_frequency(std::int64_t scale);
};

struct SyntheticSource {
  std::uint64_t seed = 1;
  SyntheticParams params;
};

struct CsvSource {
  std::filesystem::path path;
};

using DataSource = std::variant<SyntheticSource, CsvSource>;

struct ScenarioConfig {
  EpochConfig epoch;
  DataSource data;
  std::vector<AdversaryScript> adversaries;
  std::uint64_t master_seed = 1;
  bool check_freshness = true;
  std::optional<std::filesystem::path> out_dir;

  /// Throws ConfigInvalid. Timestamps are checked only for synthetic data;
  /// a CSV trace supplies its own.
  void validate() const;
};

/// Flat `key = value` text, '#' starts a comment. See README for the keys.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Readings for every registry entry (dummy row included) over m frames.
class TraceTable {
 public:
  TraceTable(std::uint32_t n_registered, std::uint32_t m, std::int64_t scale,
             std::vector<std::uint64_t> timestamps);

  std::uint32_t n_registered() const { return n_registered_; }
  std::uint32_t effective_n() const { return effective_n_; }
  std::uint32_t m() const { return m_; }
  std::int64_t scale() const { return scale_; }
  const std::vector<std::uint64_t>& timestamps() const { return timestamps_; }

  /// meter and frame are 1-based.
  std::uint64_t reading(std::uint32_t meter, std::uint32_t frame) const;
  void set_reading(std::uint32_t meter, std::uint32_t frame, std::uint64_t raw);

  /// Ground-truth aggregate of frame j over all meters.
  std::int64_t truth(std::uint32_t frame) const;

  friend bool operator==(const TraceTable&, const TraceTable&) = default;

 private:
  std::uint32_t n_registered_;
  std::uint32_t effective_n_;
  std::uint32_t m_;
  std::int64_t scale_;
  std::vector<std::uint64_t> timestamps_;
  std::vector<std::uint64_t> raw_;  // meter-major
};

/// CSV with header `meter_id,timestamp,energy`. Frames are the first m
/// distinct timestamps in ascending order; meter ids must lie in
/// [1, n_registered]. Throws MissingCell, NegativeReading, Overflow or
/// ParseError naming the row or cell.
TraceTable load_csv(const std::filesystem::path& path, const EpochConfig& epoch);
TraceTable parse_csv(std::string_view text, const EpochConfig& epoch);

TraceTable synth_trace(std::uint64_t seed, const EpochConfig& epoch, const SyntheticParams& params);

/// Builds the trace a scenario asks for.
TraceTable resolve_trace(const ScenarioConfig& config);

}  // namespace smagg
