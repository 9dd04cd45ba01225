#include "boundedrat/static_model.hpp"

#include <algorithm>

#include "boundedrat/dynamic_env.hpp"
#include "boundedrat/error.hpp"
#include "boundedrat/markov_exact.hpp"

namespace boundedrat {

void validate_static_setting(const StaticSetting& setting) {
  if (setting.pG.size() != setting.pB.size()) {
    throw ModelError(ErrorCode::DimensionMismatch, "pG and pB differ in length");
  }
  check_stochastic(setting.pG, "pG");
  check_stochastic(setting.pB, "pB");
  if (!(setting.eta > 0.0 && setting.eta <= 1.0)) throw ModelError(ErrorCode::BadEta, "eta must lie in (0,1]");
  if (!(setting.prior_G >= 0.0 && setting.prior_G <= 1.0)) {
    throw ModelError(ErrorCode::BadProbability, "prior_G must lie in [0,1]");
  }
}

DecisionRule midpoint_rule(std::size_t num_states) {
  DecisionRule rule;
  rule.decide.resize(num_states);
  for (std::size_t q = 0; q < num_states; ++q) {
    rule.decide[q] = 2 * q + 1 <= num_states ? Decision::G : Decision::B;
  }
  return rule;
}

namespace {

void check_rule(const AutomatonPolicy& policy, const DecisionRule& rule) {
  if (rule.decide.size() != policy.num_states()) {
    throw ModelError(ErrorCode::DimensionMismatch, "decision rule must cover every state");
  }
}

}  // namespace

double static_expected_utility(const StaticSetting& setting, const AutomatonPolicy& policy,
                               const DecisionRule& rule) {
  validate_static_setting(setting);
  check_rule(policy, rule);
  if (policy.num_signals() != setting.k()) {
    throw ModelError(ErrorCode::DimensionMismatch, "policy and setting disagree on k");
  }
  const auto m = static_cast<Eigen::Index>(policy.num_states());
  Eigen::VectorXd d0 = Eigen::VectorXd::Zero(m);
  d0(static_cast<Eigen::Index>(policy.initial_state())) = 1.0;
  double eu = 0.0;
  for (int truth = 0; truth < 2; ++truth) {
    const auto& probs = truth == 0 ? setting.pG : setting.pB;
    const double prior = truth == 0 ? setting.prior_G : 1.0 - setting.prior_G;
    if (prior == 0.0) continue;
    const auto dist = stopped_state_distribution(automaton_step_matrix(policy, probs), d0, setting.eta);
    double acc = 0.0;
    for (Eigen::Index q = 0; q < m; ++q) {
      acc += dist(q) * setting.utility[static_cast<int>(rule.decide[static_cast<std::size_t>(q)])][truth];
    }
    eu += prior * acc;
  }
  return eu;
}

std::vector<Distribution> propagate_sequence(const AutomatonPolicy& policy, std::size_t start,
                                             const std::vector<std::size_t>& sequence) {
  const std::size_t m = policy.num_states();
  if (start >= m) throw ModelError(ErrorCode::IndexOutOfRange, "start state out of range");
  for (auto s : sequence) {
    if (s >= policy.num_signals()) throw ModelError(ErrorCode::SignalOutOfRange, "signal out of range");
  }
  std::vector<Distribution> out;
  out.reserve(sequence.size() + 1);
  Distribution cur(m, 0.0);
  cur[start] = 1.0;
  out.push_back(cur);
  for (auto s : sequence) {
    Distribution next(m, 0.0);
    for (std::size_t q = 0; q < m; ++q) {
      if (cur[q] == 0.0) continue;
      const Observation obs = consumes_signals(policy.action(q)) ? Observation{s} : kNoSignal;
      for (const auto& t : policy.row(q, obs)) next[t.next] += cur[q] * t.prob;
    }
    cur = std::move(next);
    out.push_back(cur);
  }
  return out;
}

DecisionMass decision_mass(const Distribution& dist, const DecisionRule& rule) {
  if (dist.size() != rule.decide.size()) {
    throw ModelError(ErrorCode::DimensionMismatch, "decision rule must cover every state");
  }
  DecisionMass m;
  for (std::size_t q = 0; q < dist.size(); ++q) {
    (rule.decide[q] == Decision::G ? m.g : m.b) += dist[q];
  }
  return m;
}

PolarizationOutcome polarization_demo(const AutomatonPolicy& policy, std::size_t start_a,
                                      std::size_t start_b, const std::vector<std::size_t>& sequence,
                                      const DecisionRule& rule) {
  check_rule(policy, rule);
  PolarizationOutcome out;
  out.trajectory_a = propagate_sequence(policy, start_a, sequence);
  out.trajectory_b = propagate_sequence(policy, start_b, sequence);
  out.decision_a = decision_mass(out.trajectory_a.back(), rule);
  out.decision_b = decision_mass(out.trajectory_b.back(), rule);
  out.diverged = out.decision_a.modal() != out.decision_b.modal();
  return out;
}

FirstImpressionOutcome first_impression_demo(const AutomatonPolicy& policy, std::size_t start,
                                             const std::vector<std::size_t>& sequence,
                                             const DecisionRule& rule) {
  check_rule(policy, rule);
  std::vector<std::size_t> reversed(sequence.rbegin(), sequence.rend());
  FirstImpressionOutcome out;
  out.trajectory_forward = propagate_sequence(policy, start, sequence);
  out.trajectory_reversed = propagate_sequence(policy, start, reversed);
  out.decision_forward = decision_mass(out.trajectory_forward.back(), rule);
  out.decision_reversed = decision_mass(out.trajectory_reversed.back(), rule);
  out.order_sensitive = out.decision_forward.modal() != out.decision_reversed.modal();
  return out;
}

}  // namespace boundedrat
