#include "boundedrat/montecarlo.hpp"

#include <cmath>

#include "boundedrat/error.hpp"
#include "boundedrat/markov_exact.hpp"
#include "boundedrat/parallel.hpp"

namespace boundedrat {

std::size_t sample_index(std::span<const double> probs, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

namespace {

std::size_t sample_row(const KernelRow& row, double u) {
  double acc = 0.0;
  for (const auto& t : row) {
    acc += t.prob;
    if (u < acc) return t.next;
  }
  return row.back().next;
}

}  // namespace

SimResult simulate_run(const DynamicSetting& setting, const AutomatonPolicy& policy,
                       const SimConfig& config) {
  if (policy.num_signals() != setting.k()) {
    throw ModelError(ErrorCode::DimensionMismatch, "policy and setting disagree on k");
  }
  for (auto a : policy.actions()) {
    if (a == Action::Hold) throw ModelError(ErrorCode::DimensionMismatch, "Hold action in dynamic model");
  }
  if (config.rounds == 0) throw ModelError(ErrorCode::BadConfig, "rounds must be positive");
  if (config.batches < 2) throw ModelError(ErrorCode::BadConfig, "need at least 2 batches");
  const std::uint64_t burn = config.burn_in.value_or(config.rounds / 100);
  if (burn >= config.rounds) throw ModelError(ErrorCode::BadConfig, "burn_in must be < rounds");
  const std::uint64_t per_batch = (config.rounds - burn) / config.batches;
  if (per_batch == 0) throw ModelError(ErrorCode::BadConfig, "fewer post-burn-in rounds than batches");

  UniformSource rng(config.seed);
  int nature = rng.next() < 0.5 ? 0 : 1;
  std::size_t q = policy.initial_state();
  const double payoff[2] = {setting.xG(), setting.xB()};

  auto step = [&]() -> double {
    const Action a = policy.action(q);
    const double r = a == Action::Risky ? payoff[nature] : 0.0;
    if (a == Action::Safe) {
      q = sample_row(policy.row(q, kNoSignal), rng.next());
    } else {
      const std::size_t s = sample_index(setting.signal_probs(nature), rng.next());
      q = sample_row(policy.row(q, s), rng.next());
    }
    if (rng.next() < setting.pi()) nature = 1 - nature;
    return r;
  };

  for (std::uint64_t t = 0; t < burn; ++t) step();

  SimResult out;
  out.batch_means.reserve(config.batches);
  for (std::uint64_t b = 0; b < config.batches; ++b) {
    double sum = 0.0;
    for (std::uint64_t t = 0; t < per_batch; ++t) sum += step();
    out.batch_means.push_back(sum / static_cast<double>(per_batch));
  }
  out.rounds_used = per_batch * config.batches;

  const auto nb = static_cast<double>(config.batches);
  double mean = 0.0;
  for (double m : out.batch_means) mean += m;
  mean /= nb;
  double ss = 0.0;
  for (double m : out.batch_means) ss += (m - mean) * (m - mean);
  out.mean = mean;
  out.std_error = std::sqrt(ss / (nb - 1.0) / nb);
  return out;
}

ExactMcReport compare_exact_mc(const DynamicSetting& setting, const AutomatonPolicy& policy,
                               const SimConfig& config) {
  ExactMcReport rep;
  rep.exact = exact_average_payoff(setting, policy);
  const auto sim = simulate_run(setting, policy, config);
  rep.mc_mean = sim.mean;
  rep.std_error = sim.std_error;
  rep.z = sim.std_error > 0.0 ? (sim.mean - rep.exact) / sim.std_error
                              : (sim.mean == rep.exact ? 0.0 : INFINITY);
  rep.seed = config.seed;
  return rep;
}

std::vector<ExactMcReport> seed_sweep(const DynamicSetting& setting, const AutomatonPolicy& policy,
                                      const SimConfig& base, const std::vector<std::uint64_t>& seeds,
                                      std::size_t workers) {
  const double exact = exact_average_payoff(setting, policy);
  return parallel_map(seeds.size(), workers, [&](std::size_t i) {
    SimConfig cfg = base;
    cfg.seed = seeds[i];
    const auto sim = simulate_run(setting, policy, cfg);
    ExactMcReport rep{exact, sim.mean, sim.std_error, 0.0, cfg.seed};
    rep.z = sim.std_error > 0.0 ? (sim.mean - exact) / sim.std_error : 0.0;
    return rep;
  });
}

}  // namespace boundedrat
