#include "boundedrat/markov_exact.hpp"

#include <string>

#include "boundedrat/error.hpp"

namespace boundedrat {

namespace {

std::vector<bool> reach(const Eigen::MatrixXd& P, std::size_t start, bool forward) {
  const auto n = static_cast<std::size_t>(P.rows());
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v) {
      const double w = forward ? P(u, v) : P(v, u);
      if (w > 0.0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

Eigen::MatrixXd automaton_step_matrix(const AutomatonPolicy& policy,
                                      std::span<const double> signal_probs) {
  const std::size_t m = policy.num_states();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t q = 0; q < m; ++q) {
    if (!consumes_signals(policy.action(q))) {
      for (const auto& t : policy.row(q, kNoSignal)) A(q, t.next) += t.prob;
      continue;
    }
    for (std::size_t s = 0; s < signal_probs.size(); ++s) {
      if (signal_probs[s] == 0.0) continue;
      for (const auto& t : policy.row(q, s)) A(q, t.next) += signal_probs[s] * t.prob;
    }
  }
  return A;
}

JointChainModel build_joint_chain(const DynamicSetting& setting, const AutomatonPolicy& policy) {
  if (policy.num_signals() != setting.k()) {
    throw ModelError(ErrorCode::DimensionMismatch,
                     "policy reads " + std::to_string(policy.num_signals()) +
                         " signals, setting has " + std::to_string(setting.k()));
  }
  for (auto a : policy.actions()) {
    if (a == Action::Hold) {
      throw ModelError(ErrorCode::DimensionMismatch, "dynamic model needs Safe/Risky actions");
    }
  }
  const std::size_t m = policy.num_states();
  JointChainModel chain;
  chain.automaton_states = m;
  chain.P = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  chain.reward = Eigen::VectorXd::Zero(2 * m);
  const double pi = setting.pi();
  for (int theta = 0; theta < 2; ++theta) {
    const Eigen::MatrixXd A = automaton_step_matrix(policy, setting.signal_probs(theta));
    const double payoff = theta == 0 ? setting.xG() : setting.xB();
    for (std::size_t q = 0; q < m; ++q) {
      const std::size_t from = chain.index(theta, q);
      if (policy.action(q) == Action::Risky) chain.reward(from) = payoff;
      for (std::size_t q2 = 0; q2 < m; ++q2) {
        if (A(q, q2) == 0.0) continue;
        chain.P(from, chain.index(theta, q2)) += A(q, q2) * (1.0 - pi);
        chain.P(from, chain.index(1 - theta, q2)) += A(q, q2) * pi;
      }
    }
  }
  return chain;
}

std::vector<std::size_t> unreachable_states(const Eigen::MatrixXd& P) {
  const auto n = static_cast<std::size_t>(P.rows());
  std::vector<std::size_t> bad;
  if (n == 0) return bad;
  const auto fwd = reach(P, 0, true);
  const auto bwd = reach(P, 0, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fwd[i] || !bwd[i]) bad.push_back(i);
  }
  return bad;
}

StationaryDist stationary(const Eigen::MatrixXd& P) {
  const auto n = P.rows();
  if (n == 0 || P.cols() != n) throw ModelError(ErrorCode::DimensionMismatch, "P must be square");
  if (auto bad = unreachable_states(P); !bad.empty()) {
    std::string list;
    for (std::size_t i = 0; i < bad.size() && i < 16; ++i) {
      list += (i ? "," : "") + std::to_string(bad[i]);
    }
    if (bad.size() > 16) list += ",...";
    throw ModelError(ErrorCode::Reducible,
                     "chain is reducible; states not communicating with state 0: " + list);
  }
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw ModelError(ErrorCode::SolveFailed, "stationary system is singular");
  StationaryDist out;
  out.mu = lu.solve(b);
  out.residual = (out.mu.transpose() * P - out.mu.transpose()).cwiseAbs().maxCoeff();
  return out;
}

double exact_average_payoff(const JointChainModel& chain, const StationaryDist& dist) {
  return dist.mu.dot(chain.reward);
}

double exact_average_payoff(const DynamicSetting& setting, const AutomatonPolicy& policy) {
  const auto chain = build_joint_chain(setting, policy);
  return exact_average_payoff(chain, stationary(chain));
}

Eigen::VectorXd stopped_state_distribution(const Eigen::MatrixXd& P, const Eigen::VectorXd& d0,
                                           double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ModelError(ErrorCode::BadEta, "eta must lie in (0,1]");
  const auto n = P.rows();
  if (P.cols() != n || d0.size() != n) {
    throw ModelError(ErrorCode::DimensionMismatch, "P and d0 dimensions disagree");
  }
  // x (I - (1-eta) P) = eta d0 P, solved transposed.
  const Eigen::MatrixXd lhs = (Eigen::MatrixXd::Identity(n, n) - (1.0 - eta) * P).transpose();
  const Eigen::VectorXd rhs = eta * (P.transpose() * d0);
  return lhs.partialPivLu().solve(rhs);
}

}  // namespace boundedrat
