#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace boundedrat {

inline constexpr double kProbSumTolerance = 1e-12;

// Unchecked setting fields as read from a config or built by hand.
struct RawSetting {
  std::vector<double> pG;
  std::vector<double> pB;
  double xG = 1.0;
  double xB = -1.0;
  double pi = 0.001;
};

// Two-state Markov-modulated environment: nature is G or B, flips with
// probability pi each round, and emits one of k signals per risky round.
class DynamicSetting {
 public:
  std::size_t k() const noexcept { return pG_.size(); }
  std::span<const double> pG() const noexcept { return pG_; }
  std::span<const double> pB() const noexcept { return pB_; }
  // Signal law for nature state: 0 = G, 1 = B.
  std::span<const double> signal_probs(int nature) const noexcept {
    return nature == 0 ? std::span<const double>(pG_) : std::span<const double>(pB_);
  }
  double xG() const noexcept { return xG_; }
  double xB() const noexcept { return xB_; }
  double pi() const noexcept { return pi_; }

  RawSetting raw() const { return {pG_, pB_, xG_, xB_, pi_}; }

 private:
  friend DynamicSetting validate_setting(const RawSetting& candidate);
  DynamicSetting() = default;

  std::vector<double> pG_;
  std::vector<double> pB_;
  double xG_ = 0.0;
  double xB_ = 0.0;
  double pi_ = 0.0;
};

// Throws ModelError (NonStochastic, BadPayoffSign, BadFlipProb). Never renormalizes.
DynamicSetting validate_setting(const RawSetting& candidate);

// Checks a single signal vector: nonnegative, sums to 1 within kProbSumTolerance.
void check_stochastic(std::span<const double> probs, const char* name);

// True iff some signal has a different probability under G and B (exact test).
bool is_nontrivial(const DynamicSetting& setting);

// Payoff of an agent told nature's state every round.
double oracle_upper_bound(const DynamicSetting& setting);

}  // namespace boundedrat
