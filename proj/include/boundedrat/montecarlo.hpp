#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "boundedrat/automaton.hpp"
#include "boundedrat/dynamic_env.hpp"

namespace boundedrat {

struct SimConfig {
  std::uint64_t rounds = 1'000'000;
  std::optional<std::uint64_t> burn_in;  // defaults to rounds / 100
  std::uint64_t seed = 1;
  std::uint64_t batches = 20;
};

struct SimResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> batch_means;
  std::uint64_t rounds_used = 0;
};

struct ExactMcReport {
  double exact = 0.0;
  double mc_mean = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  std::uint64_t seed = 0;
};

// Uniform double in [0,1) from the top 53 bits of a mt19937_64 draw. Exact
// integer-to-double conversion, so sampling is platform independent.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF draw over probs in index order; falls back to the last
// positive entry on round-off.
std::size_t sample_index(std::span<const double> probs, double u);

// Forward simulation with the same within-round ordering as the joint chain.
// Nature starts uniformly at random; the automaton at its initial state.
// Post-burn-in rounds are truncated to a multiple of `batches`.
SimResult simulate_run(const DynamicSetting& setting, const AutomatonPolicy& policy,
                       const SimConfig& config);

ExactMcReport compare_exact_mc(const DynamicSetting& setting, const AutomatonPolicy& policy,
                               const SimConfig& config);

// One compare_exact_mc per seed, parallel over seeds; order follows `seeds`.
std::vector<ExactMcReport> seed_sweep(const DynamicSetting& setting, const AutomatonPolicy& policy,
                                      const SimConfig& base, const std::vector<std::uint64_t>& seeds,
                                      std::size_t workers);

}  // namespace boundedrat
