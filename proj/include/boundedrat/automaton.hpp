#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace boundedrat {

// Safe and Risky are the dynamic-model actions. Hold marks states of
// static-model automata whose decision is applied externally; Hold states
// consume signals like Risky ones.
enum class Action { Safe, Risky, Hold };

// A signal index in [0, k), or nullopt for the NoSignal observation seen in Safe states.
using Observation = std::optional<std::size_t>;
inline constexpr Observation kNoSignal = std::nullopt;

struct Transition {
  std::size_t next;
  double prob;
};
using KernelRow = std::vector<Transition>;

inline bool consumes_signals(Action a) { return a != Action::Safe; }

// Probabilistic finite-state policy. Each state has one action; Safe states
// carry a single NoSignal row, signal-consuming states carry one row per signal.
class AutomatonPolicy {
 public:
  // rows[q] must hold 1 row if actions[q] is Safe, else num_signals rows.
  // Rows are merged (duplicate targets summed) and checked to sum to 1.
  AutomatonPolicy(std::size_t num_signals, std::size_t initial_state, std::vector<Action> actions,
                  std::vector<std::vector<KernelRow>> rows);

  std::size_t num_states() const noexcept { return actions_.size(); }
  std::size_t num_signals() const noexcept { return num_signals_; }
  std::size_t initial_state() const noexcept { return initial_; }
  Action action(std::size_t state) const { return actions_.at(state); }
  std::span<const Action> actions() const noexcept { return actions_; }

  // Throws SignalOutOfRange when the observation does not fit the state's action.
  const KernelRow& row(std::size_t state, Observation obs) const;

  // Probability of state -> next under obs.
  double prob(std::size_t state, Observation obs, std::size_t next) const;

 private:
  std::size_t num_signals_;
  std::size_t initial_;
  std::vector<Action> actions_;
  std::vector<std::vector<KernelRow>> rows_;
};

// Parameters of the Safe-state-plus-ladder family. Signal indices are 0-based.
struct AFamilyParams {
  std::size_t N = 1;  // ladder height; automaton has N + 1 states
  double p_exp = 0.1;
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  double r_u = 1.0;
  double r_d = 1.0;
};

// Validates the partition against k (SignalOutOfRange, BadParameter) and the
// rates (BadProbability).
void validate_a_family(std::size_t k, const AFamilyParams& params);

// State 0 plays Safe and explores to state 1 w.p. p_exp. States 1..N play Risky:
// Pos signals climb w.p. r_u (capped at N), Neg signals descend w.p. r_d
// (state 1 falls back to 0), other signals are ignored.
AutomatonPolicy build_a_family(std::size_t k, const AFamilyParams& params);

// Linear N-state automaton reading only two signals. good_signal moves
// state i to i-1 w.p. left_prob[i]; bad_signal moves i to i+1 w.p.
// right_prob[i]; the ends stay put. right_prob[0] is the escape probability
// of state 0 and left_prob[N-1] that of state N-1. All states Hold.
AutomatonPolicy build_linear_sticky(std::size_t N, std::span<const double> left_prob,
                                    std::span<const double> right_prob, std::size_t good_signal,
                                    std::size_t bad_signal, std::size_t k,
                                    std::size_t initial_state = 0);

// Same states with signal labels remapped: new signal perm[s] behaves like old signal s.
AutomatonPolicy permute_signals(const AutomatonPolicy& policy, std::span<const std::size_t> perm);

}  // namespace boundedrat
