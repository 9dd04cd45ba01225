#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boundedrat {

enum class ErrorCode {
  NonStochastic,
  BadPayoffSign,
  BadFlipProb,
  SignalOutOfRange,
  BadProbability,
  BadParameter,
  DimensionMismatch,
  Reducible,
  SolveFailed,
  BadEta,
  TrivialSetting,
  TooManySignals,
  GridTooLarge,
  IndexOutOfRange,
  MissingUtilityEntry,
  NoMachines,
  LengthMismatch,
  MismatchedProblems,
  BadConfig,
};

std::string_view to_string(ErrorCode code);

// Every validation failure in the library surfaces as a ModelError.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace boundedrat
