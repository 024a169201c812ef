#include "smagg/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace smagg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view text, std::string_view what, ErrorCode code = ErrorCode::ConfigInvalid) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(code, std::string(what) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": expected a number, got '" +
                                            std::string(text) + "'");
}

bool parse_switch(std::string_view text, std::string_view what) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": expected on/off");
}

std::vector<std::uint8_t> parse_hex(std::string_view text) {
  if (text.size() % 2 != 0) throw Error(ErrorCode::ConfigInvalid, "hex payload has odd length");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    std::uint8_t byte = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + i + 2, byte, 16);
    if (ec != std::errc{} || ptr != text.data() + i + 2) {
      throw Error(ErrorCode::ConfigInvalid, "attack_payload is not hex");
    }
    out.push_back(byte);
  }
  return out;
}

double next_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SyntheticParams SyntheticParams::low_frequency(std::int64_t scale) {
  return {static_cast<std::uint64_t>(5000 * scale), kHourlyInterval, 0.25};
}

SyntheticParams SyntheticParams::high_frequency(std::int64_t scale) {
  return {static_cast<std::uint64_t>(150 * scale), kMinuteInterval, 0.25};
}

void ScenarioConfig::validate() const {
  EpochConfig check = epoch;
  if (const auto* synth = std::get_if<SyntheticSource>(&data)) {
    if (synth->params.max_raw >= kRawBound) {
      throw Error(ErrorCode::ConfigInvalid, "synthetic bound exceeds the raw bound");
    }
    if (synth->params.interval_seconds == 0) throw Error(ErrorCode::ConfigInvalid, "cadence must be > 0");
  } else if (check.timestamps.empty()) {
    check.timestamps = cadence_timestamps(check.m, 1);
  }
  check.validate();
  for (const AdversaryScript& script : adversaries) Adversary probe(script);
}

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(view.substr(0, eq)));
    std::string value(trim(view.substr(eq + 1)));
    if (!kv.emplace(key, value).second) {
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }

  static const std::set<std::string> known = {
      "mode", "meters", "frames", "hash", "aes", "scale", "seed", "freshness", "data",
      "csv_path", "synth_seed", "synth_max_raw", "cadence", "noise", "attack", "attack_link",
      "attack_meter", "attack_every", "attack_offset", "attack_probability", "attack_bit",
      "attack_delta", "attack_payload", "attack_seed", "out_dir"};
  for (const auto& [key, value] : kv) {
    if (!known.contains(key)) throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> std::optional<std::string_view> {
    if (auto it = kv.find(key); it != kv.end()) return std::string_view(it->second);
    return std::nullopt;
  };

  ScenarioConfig config;
  EpochConfig& epoch = config.epoch;
  if (auto v = get("mode")) epoch.mode = parse_mode(*v);
  if (auto v = get("meters")) epoch.n_registered = parse_integer<std::uint32_t>(*v, "meters");
  if (auto v = get("frames")) epoch.m = parse_integer<std::uint32_t>(*v, "frames");
  if (auto v = get("hash")) epoch.hash_alg = parse_hash_alg(*v);
  if (auto v = get("aes")) epoch.aes_bits = parse_aes_bits(*v);
  if (auto v = get("scale")) epoch.scale = parse_integer<std::int64_t>(*v, "scale");
  if (auto v = get("seed")) config.master_seed = parse_integer<std::uint64_t>(*v, "seed");
  if (auto v = get("freshness")) config.check_freshness = parse_switch(*v, "freshness");
  if (auto v = get("out_dir")) config.out_dir = std::filesystem::path(std::string(*v));

  const std::string data = std::string(get("data").value_or("synthetic"));
  if (data == "csv") {
    auto path = get("csv_path");
    if (!path) throw Error(ErrorCode::ConfigInvalid, "data = csv needs csv_path");
    config.data = CsvSource{std::string(*path)};
  } else if (data == "synthetic") {
    SyntheticSource synth;
    const std::string cadence(
        get("cadence").value_or(epoch.mode == Mode::LowFrequency ? "hourly" : "minute"));
    if (cadence == "hourly") {
      synth.params = SyntheticParams::low_frequency(epoch.scale);
    } else if (cadence == "minute") {
      synth.params = SyntheticParams::high_frequency(epoch.scale);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "cadence must be hourly or minute");
    }
    if (auto v = get("synth_seed")) synth.seed = parse_integer<std::uint64_t>(*v, "synth_seed");
    if (auto v = get("synth_max_raw")) synth.params.max_raw = parse_integer<std::uint64_t>(*v, "synth_max_raw");
    if (auto v = get("noise")) synth.params.noise = parse_double(*v, "noise");
    epoch.timestamps = cadence_timestamps(epoch.m, synth.params.interval_seconds);
    config.data = synth;
  } else {
    throw Error(ErrorCode::ConfigInvalid, "data must be synthetic or csv");
  }

  const std::string attack(get("attack").value_or("none"));
  if (attack != "none") {
    AdversaryScript script;
    script.action = parse_attack_kind(attack);
    if (auto v = get("attack_link")) script.link = parse_link(*v);
    if (auto v = get("attack_meter")) script.meter = parse_integer<std::uint32_t>(*v, "attack_meter");
    if (auto v = get("attack_every")) script.frames.every = parse_integer<std::uint32_t>(*v, "attack_every");
    if (auto v = get("attack_offset")) script.frames.offset = parse_integer<std::uint32_t>(*v, "attack_offset");
    if (auto v = get("attack_probability")) script.frames.probability = parse_double(*v, "attack_probability");
    if (auto v = get("attack_bit")) script.bit = parse_integer<std::uint32_t>(*v, "attack_bit");
    if (auto v = get("attack_delta"); v && *v != "random") {
      if (v->starts_with("-")) {
        script.delta = static_cast<std::uint64_t>(parse_integer<std::int64_t>(*v, "attack_delta"));
      } else {
        script.delta = parse_integer<std::uint64_t>(*v, "attack_delta");
      }
    }
    if (auto v = get("attack_payload")) script.forged_payload = parse_hex(*v);
    if (auto v = get("attack_seed")) script.rng_seed = parse_integer<std::uint64_t>(*v, "attack_seed");
    config.adversaries.push_back(std::move(script));
  }

  config.validate();
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ScenarioConfig config = parse_config(buffer.str());
  if (auto* csv = std::get_if<CsvSource>(&config.data); csv && csv->path.is_relative()) {
    csv->path = path.parent_path() / csv->path;
  }
  if (config.out_dir && config.out_dir->is_relative()) config.out_dir = path.parent_path() / *config.out_dir;
  return config;
}

// --- traces ----------------------------------------------------------------

TraceTable::TraceTable(std::uint32_t n_registered, std::uint32_t m, std::int64_t scale,
                       std::vector<std::uint64_t> timestamps)
    : n_registered_(n_registered),
      effective_n_(build_registry(n_registered).effective_n()),
      m_(m),
      scale_(scale),
      timestamps_(std::move(timestamps)),
      raw_(static_cast<std::size_t>(effective_n_) * m, 0) {}

std::uint64_t TraceTable::reading(std::uint32_t meter, std::uint32_t frame) const {
  if (meter < 1 || meter > effective_n_ || frame < 1 || frame > m_) {
    throw Error(ErrorCode::Precondition, "cell outside the trace");
  }
  return raw_[static_cast<std::size_t>(meter - 1) * m_ + (frame - 1)];
}

void TraceTable::set_reading(std::uint32_t meter, std::uint32_t frame, std::uint64_t raw) {
  if (meter < 1 || meter > n_registered_ || frame < 1 || frame > m_) {
    throw Error(ErrorCode::Precondition, "cell outside the registered meters");
  }
  if (raw >= kRawBound) throw Error(ErrorCode::Overflow, "reading exceeds the raw bound");
  raw_[static_cast<std::size_t>(meter - 1) * m_ + (frame - 1)] = raw;
}

std::int64_t TraceTable::truth(std::uint32_t frame) const {
  std::int64_t sum = 0;
  for (std::uint32_t i = 1; i <= effective_n_; ++i) sum += static_cast<std::int64_t>(reading(i, frame));
  return sum;
}

TraceTable parse_csv(std::string_view text, const EpochConfig& epoch) {
  struct Row {
    std::uint32_t meter;
    std::uint64_t timestamp;
    std::uint64_t raw;
  };
  std::vector<Row> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    for (auto comma = rest.find(','); ; comma = rest.find(',')) {
      cells.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const std::string where = "row " + std::to_string(line_no);
    if (!header_seen) {
      if (cells.size() != 3 || cells[0] != "meter_id" || cells[1] != "timestamp" || cells[2] != "energy") {
        throw Error(ErrorCode::ParseError, where + ": expected header meter_id,timestamp,energy");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) throw Error(ErrorCode::ParseError, where + ": expected 3 columns");
    Row row{parse_integer<std::uint32_t>(cells[0], where + " column meter_id", ErrorCode::ParseError),
            parse_integer<std::uint64_t>(cells[1], where + " column timestamp", ErrorCode::ParseError), 0};
    if (row.meter < 1 || row.meter > epoch.n_registered) {
      throw Error(ErrorCode::ParseError, where + ": meter_id " + std::to_string(row.meter) +
                                             " is not registered");
    }
    try {
      row.raw = fixed_point_encode(cells[2], epoch.scale);
    } catch (const Error& e) {
      throw Error(e.code(), where + " column energy: " + e.what());
    }
    rows.push_back(row);
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "empty CSV");

  std::set<std::uint64_t> distinct;
  for (const Row& r : rows) distinct.insert(r.timestamp);
  std::vector<std::uint64_t> timestamps(distinct.begin(), distinct.end());
  if (timestamps.size() > epoch.m) timestamps.resize(epoch.m);
  std::map<std::uint64_t, std::uint32_t> frame_of;
  for (std::uint32_t j = 0; j < timestamps.size(); ++j) frame_of[timestamps[j]] = j + 1;

  // Pad with placeholders so a short file reports the first missing frame.
  std::vector<std::uint64_t> padded = timestamps;
  while (padded.size() < epoch.m) padded.push_back(padded.empty() ? 0 : padded.back() + 1);
  TraceTable table(epoch.n_registered, epoch.m, epoch.scale, padded);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(epoch.n_registered) * epoch.m, 0);
  for (const Row& r : rows) {
    auto it = frame_of.find(r.timestamp);
    if (it == frame_of.end()) continue;
    auto& flag = seen[static_cast<std::size_t>(r.meter - 1) * epoch.m + (it->second - 1)];
    if (flag) {
      throw Error(ErrorCode::ParseError, "duplicate reading for meter " + std::to_string(r.meter) +
                                             " at timestamp " + std::to_string(r.timestamp));
    }
    flag = 1;
    table.set_reading(r.meter, it->second, r.raw);
  }
  for (std::uint32_t i = 1; i <= epoch.n_registered; ++i) {
    for (std::uint32_t j = 1; j <= epoch.m; ++j) {
      if (!seen[static_cast<std::size_t>(i - 1) * epoch.m + (j - 1)]) {
        throw Error(ErrorCode::MissingCell, "meter " + std::to_string(i) + " frame " + std::to_string(j));
      }
    }
  }
  return table;
}

TraceTable load_csv(const std::filesystem::path& path, const EpochConfig& epoch) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), epoch);
}

TraceTable synth_trace(std::uint64_t seed, const EpochConfig& epoch, const SyntheticParams& params) {
  if (params.max_raw >= kRawBound) throw Error(ErrorCode::Precondition, "bound exceeds the raw bound");
  std::vector<std::uint64_t> timestamps = epoch.timestamps;
  if (timestamps.size() != epoch.m) timestamps = cadence_timestamps(epoch.m, params.interval_seconds);
  TraceTable table(epoch.n_registered, epoch.m, epoch.scale, timestamps);

  std::mt19937_64 rng(seed);
  const double bound = static_cast<double>(params.max_raw);
  constexpr double kDay = 86400.0;
  for (std::uint32_t i = 1; i <= epoch.n_registered; ++i) {
    const double base = (0.15 + 0.35 * next_unit(rng)) * bound;
    const double phase = 2.0 * std::numbers::pi * next_unit(rng);
    for (std::uint32_t j = 1; j <= epoch.m; ++j) {
      const double t = static_cast<double>(timestamps[j - 1]);
      const double daily = 1.0 + 0.6 * std::sin(2.0 * std::numbers::pi * std::fmod(t, kDay) / kDay + phase);
      const double jitter = 1.0 + params.noise * (2.0 * next_unit(rng) - 1.0);
      const double value = std::clamp(std::floor(base * daily * jitter), 0.0, bound);
      table.set_reading(i, j, static_cast<std::uint64_t>(value));
    }
  }
  return table;
}

TraceTable resolve_trace(const ScenarioConfig& config) {
  if (const auto* synth = std::get_if<SyntheticSource>(&config.data)) {
    return synth_trace(synth->seed, config.epoch, synth->params);
  }
  return load_csv(std::get<CsvSource>(config.data).path, config.epoch);
}

}  // namespace smagg
