#include "boundedrat/dynamic_env.hpp"

#include <cmath>
#include <sstream>

#include "boundedrat/error.hpp"

namespace boundedrat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonStochastic: return "NonStochastic";
    case ErrorCode::BadPayoffSign: return "BadPayoffSign";
    case ErrorCode::BadFlipProb: return "BadFlipProb";
    case ErrorCode::SignalOutOfRange: return "SignalOutOfRange";
    case ErrorCode::BadProbability: return "BadProbability";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::BadEta: return "BadEta";
    case ErrorCode::TrivialSetting: return "TrivialSetting";
    case ErrorCode::TooManySignals: return "TooManySignals";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MissingUtilityEntry: return "MissingUtilityEntry";
    case ErrorCode::NoMachines: return "NoMachines";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MismatchedProblems: return "MismatchedProblems";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

void check_stochastic(std::span<const double> probs, const char* name) {
  if (probs.empty()) {
    throw ModelError(ErrorCode::NonStochastic, std::string(name) + " is empty");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ModelError(ErrorCode::NonStochastic, std::string(name) + " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << name << " sums to " << sum << ", not 1";
    throw ModelError(ErrorCode::NonStochastic, msg.str());
  }
}

DynamicSetting validate_setting(const RawSetting& candidate) {
  if (candidate.pG.size() != candidate.pB.size()) {
    throw ModelError(ErrorCode::DimensionMismatch, "pG and pB differ in length");
  }
  check_stochastic(candidate.pG, "pG");
  check_stochastic(candidate.pB, "pB");
  if (!(candidate.xG > 0.0) || !(candidate.xB < 0.0)) {
    throw ModelError(ErrorCode::BadPayoffSign, "need xG > 0 > xB");
  }
  if (!(candidate.pi > 0.0 && candidate.pi <= 0.5)) {
    throw ModelError(ErrorCode::BadFlipProb, "pi must lie in (0, 0.5]");
  }
  DynamicSetting s;
  s.pG_ = candidate.pG;
  s.pB_ = candidate.pB;
  s.xG_ = candidate.xG;
  s.xB_ = candidate.xB;
  s.pi_ = candidate.pi;
  return s;
}

bool is_nontrivial(const DynamicSetting& setting) {
  for (std::size_t i = 0; i < setting.k(); ++i) {
    if (setting.pG()[i] != setting.pB()[i]) return true;
  }
  return false;
}

double oracle_upper_bound(const DynamicSetting& setting) { return setting.xG() / 2.0; }

}  // namespace boundedrat
