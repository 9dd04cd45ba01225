#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "boundedrat/automaton.hpp"
#include "boundedrat/dynamic_env.hpp"

namespace boundedrat {

struct Partition {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  bool operator==(const Partition&) const = default;
};

struct GridPoint {
  double p_exp;
  double payoff;
};

struct OptResult {
  double best_pexp = 0.0;
  double best_payoff = 0.0;
  std::vector<GridPoint> grid_trace;  // evaluation order: coarse grid, then refinements
  Partition partition_used;
  double r_u = 1.0;
  double r_d = 1.0;
};

// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(std::size_t points = 40, double lo = 1e-5, double hi = 1.0);

// Pos = most G-indicative signal, Neg = most B-indicative (likelihood ratio,
// ties to lowest index, a zero denominator counts as +inf). Throws TrivialSetting.
Partition default_partition(const DynamicSetting& setting);

AFamilyParams a_family(std::size_t N, double p_exp, const Partition& part, double r_u, double r_d);

// Coarse grid evaluation followed by two rounds of 10 interior points between
// the incumbent's evaluated neighbours. Grid points run on `workers` threads.
OptResult optimize_pexp(const DynamicSetting& setting, std::size_t N, const Partition& partition,
                        double r_u, double r_d, const std::vector<double>& grid,
                        std::size_t workers = 1);

// Rate grid used when rates are searched rather than fixed at 1.
const std::vector<double>& rate_grid();

// Best optimize_pexp result over every assignment of signals to Pos/Neg/ignored
// with Pos and Neg nonempty. k <= 6 (TooManySignals). Partitions whose chain is
// reducible are skipped. With search_rates, r_u and r_d range over rate_grid().
OptResult exhaustive_partition_search(const DynamicSetting& setting, std::size_t N, double r_u,
                                      double r_d, const std::vector<double>& grid,
                                      std::size_t workers = 1, bool search_rates = false);

// pi(n) = pi_c / n^pi_a, p_exp(n) = pexp_c / n^pexp_b.
struct ScheduleSpec {
  double pi_c = 1.0;
  double pi_a = 2.0;
  double pexp_c = 1.0;
  double pexp_b = 1.0;
  std::vector<std::size_t> n_list;

  double pi_of(std::size_t n) const;
  double pexp_of(std::size_t n) const;
  // n * pi(n) and pi(n) / p_exp(n) both strictly decrease along n_list.
  bool limit_hypothesis_holds() const;
};

struct CurvePoint {
  std::size_t n;
  double pi;
  double p_exp;
  double payoff;
};

// Exact payoff of A[n, p_exp(n), Pos, Neg, r_u, r_d] at pi = pi(n) for every n.
// Throws BadParameter if the schedule values leave (0,1] or, when
// require_hypothesis is set, the limit hypothesis fails.
std::vector<CurvePoint> theorem1_curve(const RawSetting& base, const ScheduleSpec& schedule,
                                       const Partition& partition, double r_u, double r_d,
                                       bool require_hypothesis = true, std::size_t workers = 1);

struct PolicySearchResult {
  AutomatonPolicy policy;
  double payoff;
  std::size_t candidates;
  std::size_t evaluated;  // irreducible candidates
};

inline constexpr std::size_t kPolicySearchCap = 10'000'000;

// Number of candidates brute_force_policy_search would enumerate.
std::size_t count_policy_candidates(std::size_t k, std::size_t M, const std::vector<double>& prob_grid);

// Enumerates every Safe/Risky labelling of M <= 3 states and every kernel row
// that mixes {stay, up, down} with weights from prob_grid summing to 1.
// Reducible candidates are skipped. Throws GridTooLarge above kPolicySearchCap.
PolicySearchResult brute_force_policy_search(const DynamicSetting& setting, std::size_t M,
                                             const std::vector<double>& prob_grid);

}  // namespace boundedrat
