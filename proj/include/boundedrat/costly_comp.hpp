#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace boundedrat {

// u(s, t, a, c) stored per (s, t, a) as a short list of (complexity, value) pairs.
class UtilityTable {
 public:
  UtilityTable() = default;
  UtilityTable(std::size_t states, std::size_t types, std::size_t actions);

  void set(std::size_t s, std::size_t t, std::size_t a, std::uint64_t c, double value);
  std::optional<double> get(std::size_t s, std::size_t t, std::size_t a, std::uint64_t c) const;

  std::size_t states() const noexcept { return states_; }
  std::size_t types() const noexcept { return types_; }
  std::size_t actions() const noexcept { return actions_; }

  // Every defined entry, (s, t, a) major, c ascending.
  struct Entry {
    std::size_t s, t, a;
    std::uint64_t c;
    double value;
  };
  std::vector<Entry> entries() const;

 private:
  std::size_t slot(std::size_t s, std::size_t t, std::size_t a) const;

  std::size_t states_ = 0, types_ = 0, actions_ = 0;
  std::vector<std::vector<std::pair<std::uint64_t, double>>> cells_;
};

// Extensional machine: output action and complexity for every (s, t), stored s-major.
struct MachineSpec {
  std::string name;
  std::vector<std::size_t> out;
  std::vector<std::uint64_t> complexity;
};

struct CompProblem {
  std::vector<std::string> states;
  std::vector<std::string> types;
  std::vector<std::string> actions;
  std::vector<double> prior;  // Pr(s, t), s-major
  std::vector<MachineSpec> machines;
  UtilityTable utility;

  std::size_t cell(std::size_t s, std::size_t t) const noexcept { return s * types.size() + t; }
};

// Checks table shapes, the prior, and output labels. Throws ModelError.
void validate_problem(const CompProblem& problem);

// sum_{s,t} Pr(s,t) u(s, t, out(M,s,t), C(M,s,t)).
// Throws IndexOutOfRange, MissingUtilityEntry.
double expected_utility(const CompProblem& problem, std::size_t machine_index);

struct MachineChoiceResult {
  std::size_t index;
  double utility;
};

// Highest expected utility; ties go to the lowest index. Throws NoMachines.
MachineChoiceResult best_machine(const CompProblem& problem);

// best_machine(after).utility - best_machine(before).utility
double value_of_refinement(const CompProblem& before, const CompProblem& after);

// --- Primality instance -------------------------------------------------------

enum class MachineKind { AlwaysPass, AlwaysPrime, AlwaysComposite, TrialDivisionBudget, TrialDivisionFull };

struct PrimalityMachine {
  MachineKind kind = MachineKind::TrialDivisionFull;
  std::uint64_t budget = 0;  // probes allowed, TrialDivisionBudget only

  std::string name() const;
  // "always_pass", "always_prime", "always_composite", "trial_division_full",
  // "trial_division_budget:<B>". Throws BadConfig.
  static PrimalityMachine parse(const std::string& text);
};

// Action labels of the primality instance, in index order.
inline constexpr std::size_t kActionComposite = 0;
inline constexpr std::size_t kActionPrime = 1;
inline constexpr std::size_t kActionPass = 2;
inline constexpr std::uint64_t kLateCharge = 10;

struct PrimalityConfig {
  std::uint64_t type_bound = std::uint64_t{1} << 16;
  std::uint64_t step_cap = std::uint64_t{1} << 8;
  std::vector<PrimalityMachine> machines;
  // Optional uncertainty over states: labels, prior, and Prime(s, t) for
  // t = 2..type_bound. Defaults to one state with the true primality.
  std::vector<std::string> state_labels{"true"};
  std::vector<double> state_prior{1.0};
  std::optional<std::vector<std::vector<bool>>> prime_truth;
};

struct PrimalityRow {
  std::uint64_t t;
  bool is_prime;
  std::uint64_t probes_full;  // divisors tested by full trial division
};

// Rows for t = 2..bound from a smallest-prime-factor sieve. When the
// BOUNDEDRAT_CACHE_DIR environment variable is set the table is read from /
// written to <dir>/primality_<bound>.csv.
std::vector<PrimalityRow> primality_table(std::uint64_t bound);

struct TrialDivisionOutcome {
  std::size_t action;
  std::uint64_t probes;
};

// Tests d = 2, 3, ... while d*d <= t, at most `budget` divisors.
// Finds a divisor -> composite; runs out of d -> prime; runs out of budget -> pass.
TrialDivisionOutcome run_trial_division(const PrimalityRow& row, std::uint64_t budget);

// Types 2..type_bound with a uniform prior. Complexity is 0 when the probe
// count is within step_cap and kLateCharge otherwise. u = 10 - c when correct,
// 1 - c on pass, -10 - c when wrong.
CompProblem make_primality_instance(const PrimalityConfig& config);

// --- Conversation ---------------------------------------------------------------

struct ConversationSpec {
  std::uint64_t domain_size = 100;
  std::uint64_t questions = 7;
  double payoff = 100.0;
};

// v * min(1, 2^q / n) - v / n.
double conversation_value(const ConversationSpec& spec);

}  // namespace boundedrat
