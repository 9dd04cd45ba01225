#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "boundedrat/automaton.hpp"
#include "boundedrat/dynamic_env.hpp"

namespace boundedrat {

// Joint (nature, automaton state) chain. Row index = nature * M + q with
// nature 0 = G, 1 = B.
struct JointChainModel {
  std::size_t automaton_states = 0;
  Eigen::MatrixXd P;
  Eigen::VectorXd reward;

  std::size_t dim() const noexcept { return 2 * automaton_states; }
  std::size_t index(int nature, std::size_t q) const noexcept {
    return static_cast<std::size_t>(nature) * automaton_states + q;
  }
  int nature_of(std::size_t idx) const noexcept { return idx < automaton_states ? 0 : 1; }
  std::size_t state_of(std::size_t idx) const noexcept { return idx % automaton_states; }
};

struct StationaryDist {
  Eigen::VectorXd mu;
  double residual = 0.0;  // max-norm of mu P - mu
};

// One-step automaton transition matrix when nature is fixed (signals drawn
// from that nature's law; Safe states use their NoSignal row).
Eigen::MatrixXd automaton_step_matrix(const AutomatonPolicy& policy,
                                      std::span<const double> signal_probs);

// Within a round: reward from the current (nature, q); the automaton moves on
// a signal drawn from the current nature; then nature flips w.p. pi.
// Throws DimensionMismatch on k mismatch or a Hold action.
JointChainModel build_joint_chain(const DynamicSetting& setting, const AutomatonPolicy& policy);

// States that are not mutually reachable with state 0 over the nonzero
// pattern of P. Empty iff P is irreducible.
std::vector<std::size_t> unreachable_states(const Eigen::MatrixXd& P);

// Dense solve of (P^T - I) x = 0 with one row replaced by sum(x) = 1.
// Throws Reducible or SolveFailed.
StationaryDist stationary(const Eigen::MatrixXd& P);
inline StationaryDist stationary(const JointChainModel& chain) { return stationary(chain.P); }

// Long-run average reward per round, i.e. E_pi[A].
double exact_average_payoff(const DynamicSetting& setting, const AutomatonPolicy& policy);
double exact_average_payoff(const JointChainModel& chain, const StationaryDist& dist);

// Distribution of the state at a geometric stopping time: each step is
// taken, then the process ends w.p. eta. Returns sum_t eta (1-eta)^t d0 P^{t+1}
// = eta d0 P (I - (1-eta) P)^{-1}. Throws BadEta.
Eigen::VectorXd stopped_state_distribution(const Eigen::MatrixXd& P, const Eigen::VectorXd& d0,
                                           double eta);

}  // namespace boundedrat
