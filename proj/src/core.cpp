#include "smagg/core.hpp"

#include <cctype>
#include <cmath>

namespace smagg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::NegativeReading: return "NegativeReading";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::TamperDetected: return "TamperDetected";
    case ErrorCode::NonIntegralRecovery: return "NonIntegralRecovery";
    case ErrorCode::PaddingViolation: return "PaddingViolation";
    case ErrorCode::TamperSuspected: return "TamperSuspected";
    case ErrorCode::MissingMeter: return "MissingMeter";
    case ErrorCode::MissingMessage: return "MissingMessage";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::PairDeclined: return "PairDeclined";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(Mode mode) {
  return mode == Mode::LowFrequency ? "low" : "high";
}

std::string_view to_string(HashAlg alg) {
  switch (alg) {
    case HashAlg::Sha224: return "sha224";
    case HashAlg::Sha256: return "sha256";
    case HashAlg::Sha512: return "sha512";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "low" || text == "rls") return Mode::LowFrequency;
  if (text == "high" || text == "rde") return Mode::HighFrequency;
  throw Error(ErrorCode::ConfigInvalid, "unknown mode '" + std::string(text) + "'");
}

HashAlg parse_hash_alg(std::string_view text) {
  if (text == "sha224") return HashAlg::Sha224;
  if (text == "sha256") return HashAlg::Sha256;
  if (text == "sha512") return HashAlg::Sha512;
  throw Error(ErrorCode::ConfigInvalid, "unknown hash algorithm '" + std::string(text) + "'");
}

AesBits parse_aes_bits(std::string_view text) {
  if (text == "128") return AesBits::Aes128;
  if (text == "192") return AesBits::Aes192;
  if (text == "256") return AesBits::Aes256;
  throw Error(ErrorCode::ConfigInvalid, "unsupported AES key size '" + std::string(text) + "'");
}

void EpochConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigInvalid, why); };
  if (n_registered < 1) fail("at least one meter must be registered");
  if (n_registered + (n_registered % 2 == 0 ? 1 : 0) > kMaxMeters) fail("too many meters");
  if (m < 1) fail("an epoch needs at least one frame");
  if (mode == Mode::HighFrequency && m % 2 != 0) fail("high-frequency mode needs an even frame count");
  if (scale != 1 && scale != 10 && scale != 100 && scale != 1000) fail("scale must be 1, 10, 100 or 1000");
  if (timestamps.size() != m) fail("expected one timestamp per frame");
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) fail("timestamps must be strictly increasing");
  }
}

std::vector<std::uint64_t> cadence_timestamps(std::uint32_t m, std::uint64_t interval_seconds) {
  std::vector<std::uint64_t> out(m);
  for (std::uint32_t j = 0; j < m; ++j) out[j] = j * interval_seconds;
  return out;
}

Registry::Registry(std::uint32_t n_registered) : n_registered_(n_registered) {
  meters_.reserve(n_registered + 1);
  for (std::uint32_t i = 1; i <= n_registered; ++i) meters_.push_back({i, false});
  if (n_registered % 2 == 0) meters_.push_back({n_registered + 1, true});
}

const MeterId& Registry::meter(std::uint32_t index) const {
  if (index < 1 || index > meters_.size()) {
    throw Error(ErrorCode::Precondition, "meter index " + std::to_string(index) + " not registered");
  }
  return meters_[index - 1];
}

Registry build_registry(std::uint32_t n_registered) {
  if (n_registered < 1) throw Error(ErrorCode::Precondition, "n_registered must be >= 1");
  return Registry(n_registered);
}

std::uint64_t fixed_point_encode(double value, std::int64_t scale) {
  if (std::isnan(value)) throw Error(ErrorCode::Precondition, "reading is not a number");
  if (value < 0) throw Error(ErrorCode::NegativeReading, std::to_string(value));
  const long double scaled = std::floor(static_cast<long double>(value) * scale + 0.5L);
  if (scaled >= static_cast<long double>(kRawBound)) {
    throw Error(ErrorCode::Overflow, std::to_string(value) + " exceeds the raw bound");
  }
  return static_cast<std::uint64_t>(scaled);
}

std::uint64_t fixed_point_encode(std::string_view decimal, std::int64_t scale) {
  const std::string text(decimal);
  auto parse_error = [&] { return Error(ErrorCode::ParseError, "bad decimal '" + text + "'"); };
  std::size_t pos = 0;
  while (pos < decimal.size() && std::isspace(static_cast<unsigned char>(decimal[pos]))) ++pos;
  std::size_t end = decimal.size();
  while (end > pos && std::isspace(static_cast<unsigned char>(decimal[end - 1]))) --end;
  decimal = decimal.substr(pos, end - pos);
  if (decimal.empty()) throw parse_error();

  bool negative = false;
  if (decimal.front() == '-' || decimal.front() == '+') {
    negative = decimal.front() == '-';
    decimal.remove_prefix(1);
  }
  int digits_after = 0;
  int scale_digits = 0;
  for (std::int64_t s = scale; s > 1; s /= 10) ++scale_digits;

  std::uint64_t value = 0;
  bool seen_point = false;
  bool seen_digit = false;
  bool round_up = false;
  for (char c : decimal) {
    if (c == '.') {
      if (seen_point) throw parse_error();
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) throw parse_error();
    seen_digit = true;
    const int digit = c - '0';
    if (seen_point && digits_after >= scale_digits) {
      // First dropped digit decides half-up rounding.
      if (digits_after == scale_digits) round_up = digit >= 5;
      ++digits_after;
      continue;
    }
    if (seen_point) ++digits_after;
    value = value * 10 + static_cast<std::uint64_t>(digit);
    if (value >= kRawBound * 10) throw Error(ErrorCode::Overflow, text + " exceeds the raw bound");
  }
  if (!seen_digit) throw parse_error();
  for (int i = std::min(digits_after, scale_digits); i < scale_digits; ++i) value *= 10;
  if (round_up) ++value;
  if (negative && value != 0) throw Error(ErrorCode::NegativeReading, text);
  if (value >= kRawBound) throw Error(ErrorCode::Overflow, text + " exceeds the raw bound");
  return value;
}

double fixed_point_decode(std::int64_t raw, std::int64_t scale) {
  return static_cast<double>(raw) / static_cast<double>(scale);
}

}  // namespace smagg
