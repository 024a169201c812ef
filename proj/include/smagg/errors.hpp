#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smagg {

enum class ErrorCode {
  Precondition,
  NegativeReading,
  Overflow,
  TamperDetected,
  NonIntegralRecovery,
  PaddingViolation,
  TamperSuspected,
  MissingMeter,
  MissingMessage,
  FrameMismatch,
  PairDeclined,
  ConfigInvalid,
  MissingCell,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above so
// callers (the scenario runner in particular) can tally outcomes by kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smagg
