#include "boundedrat/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "boundedrat/dynamic_env.hpp"
#include "boundedrat/error.hpp"

namespace boundedrat {

namespace {

KernelRow normalize_row(const KernelRow& row, std::size_t num_states, std::size_t state) {
  std::map<std::size_t, double> merged;
  for (const auto& t : row) {
    if (t.next >= num_states) {
      throw ModelError(ErrorCode::IndexOutOfRange,
                       "transition from state " + std::to_string(state) + " targets state " +
                           std::to_string(t.next));
    }
    if (!(t.prob >= 0.0 && t.prob <= 1.0)) {
      throw ModelError(ErrorCode::BadProbability,
                       "transition probability out of [0,1] in state " + std::to_string(state));
    }
    merged[t.next] += t.prob;
  }
  KernelRow out;
  double sum = 0.0;
  for (const auto& [next, p] : merged) {
    sum += p;
    if (p > 0.0) out.push_back({next, p});
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    throw ModelError(ErrorCode::NonStochastic,
                     "kernel row of state " + std::to_string(state) + " does not sum to 1");
  }
  return out;
}

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ModelError(ErrorCode::BadProbability, std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

AutomatonPolicy::AutomatonPolicy(std::size_t num_signals, std::size_t initial_state,
                                 std::vector<Action> actions,
                                 std::vector<std::vector<KernelRow>> rows)
    : num_signals_(num_signals), initial_(initial_state), actions_(std::move(actions)) {
  const std::size_t m = actions_.size();
  if (m == 0) throw ModelError(ErrorCode::BadParameter, "policy needs at least one state");
  if (initial_ >= m) throw ModelError(ErrorCode::IndexOutOfRange, "initial state out of range");
  if (rows.size() != m) throw ModelError(ErrorCode::DimensionMismatch, "one row set per state required");
  rows_.resize(m);
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t expected = consumes_signals(actions_[q]) ? num_signals_ : 1;
    if (rows[q].size() != expected) {
      throw ModelError(ErrorCode::DimensionMismatch,
                       "state " + std::to_string(q) + " has " + std::to_string(rows[q].size()) +
                           " observation rows, expected " + std::to_string(expected));
    }
    rows_[q].reserve(expected);
    for (const auto& r : rows[q]) rows_[q].push_back(normalize_row(r, m, q));
  }
}

const KernelRow& AutomatonPolicy::row(std::size_t state, Observation obs) const {
  if (state >= num_states()) throw ModelError(ErrorCode::IndexOutOfRange, "state out of range");
  if (consumes_signals(actions_[state])) {
    if (!obs || *obs >= num_signals_) {
      throw ModelError(ErrorCode::SignalOutOfRange,
                       "state " + std::to_string(state) + " needs a signal in [0, k)");
    }
    return rows_[state][*obs];
  }
  if (obs) {
    throw ModelError(ErrorCode::SignalOutOfRange,
                     "Safe state " + std::to_string(state) + " observes no signal");
  }
  return rows_[state][0];
}

double AutomatonPolicy::prob(std::size_t state, Observation obs, std::size_t next) const {
  for (const auto& t : row(state, obs)) {
    if (t.next == next) return t.prob;
  }
  return 0.0;
}

void validate_a_family(std::size_t k, const AFamilyParams& params) {
  if (params.N < 1) throw ModelError(ErrorCode::BadParameter, "N must be positive");
  if (params.pos.empty() || params.neg.empty()) {
    throw ModelError(ErrorCode::BadParameter, "Pos and Neg must be nonempty");
  }
  for (auto s : params.pos) {
    if (s >= k) throw ModelError(ErrorCode::SignalOutOfRange, "Pos signal out of range");
  }
  for (auto s : params.neg) {
    if (s >= k) throw ModelError(ErrorCode::SignalOutOfRange, "Neg signal out of range");
    if (std::find(params.pos.begin(), params.pos.end(), s) != params.pos.end()) {
      throw ModelError(ErrorCode::BadParameter, "Pos and Neg overlap");
    }
  }
  for (auto [p, name] : {std::pair{params.p_exp, "p_exp"}, std::pair{params.r_u, "r_u"},
                         std::pair{params.r_d, "r_d"}}) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ModelError(ErrorCode::BadProbability, std::string(name) + " must lie in (0,1]");
    }
  }
}

AutomatonPolicy build_a_family(std::size_t k, const AFamilyParams& params) {
  validate_a_family(k, params);
  const std::size_t n = params.N;
  auto in = [](const std::vector<std::size_t>& set, std::size_t s) {
    return std::find(set.begin(), set.end(), s) != set.end();
  };

  std::vector<Action> actions(n + 1, Action::Risky);
  actions[0] = Action::Safe;
  std::vector<std::vector<KernelRow>> rows(n + 1);
  rows[0] = {{{0, 1.0 - params.p_exp}, {1, params.p_exp}}};
  for (std::size_t q = 1; q <= n; ++q) {
    rows[q].resize(k);
    for (std::size_t s = 0; s < k; ++s) {
      if (in(params.pos, s) && q < n) {
        rows[q][s] = {{q, 1.0 - params.r_u}, {q + 1, params.r_u}};
      } else if (in(params.neg, s)) {
        rows[q][s] = {{q, 1.0 - params.r_d}, {q - 1, params.r_d}};
      } else {
        rows[q][s] = {{q, 1.0}};
      }
    }
  }
  return AutomatonPolicy(k, 0, std::move(actions), std::move(rows));
}

AutomatonPolicy build_linear_sticky(std::size_t N, std::span<const double> left_prob,
                                    std::span<const double> right_prob, std::size_t good_signal,
                                    std::size_t bad_signal, std::size_t k,
                                    std::size_t initial_state) {
  if (N < 1) throw ModelError(ErrorCode::BadParameter, "N must be positive");
  if (left_prob.size() != N || right_prob.size() != N) {
    throw ModelError(ErrorCode::DimensionMismatch, "left_prob and right_prob need N entries");
  }
  if (good_signal >= k || bad_signal >= k) {
    throw ModelError(ErrorCode::SignalOutOfRange, "good/bad signal out of range");
  }
  if (good_signal == bad_signal) {
    throw ModelError(ErrorCode::BadParameter, "good and bad signal must differ");
  }
  for (double p : left_prob) check_prob(p, "left_prob");
  for (double p : right_prob) check_prob(p, "right_prob");

  std::vector<std::vector<KernelRow>> rows(N, std::vector<KernelRow>(k));
  for (std::size_t q = 0; q < N; ++q) {
    for (std::size_t s = 0; s < k; ++s) rows[q][s] = {{q, 1.0}};
    if (q > 0) rows[q][good_signal] = {{q, 1.0 - left_prob[q]}, {q - 1, left_prob[q]}};
    if (q + 1 < N) rows[q][bad_signal] = {{q, 1.0 - right_prob[q]}, {q + 1, right_prob[q]}};
  }
  return AutomatonPolicy(k, initial_state, std::vector<Action>(N, Action::Hold), std::move(rows));
}

AutomatonPolicy permute_signals(const AutomatonPolicy& policy, std::span<const std::size_t> perm) {
  const std::size_t k = policy.num_signals();
  if (perm.size() != k) throw ModelError(ErrorCode::DimensionMismatch, "permutation length != k");
  std::vector<std::vector<KernelRow>> rows(policy.num_states());
  for (std::size_t q = 0; q < policy.num_states(); ++q) {
    if (!consumes_signals(policy.action(q))) {
      rows[q] = {policy.row(q, kNoSignal)};
      continue;
    }
    rows[q].resize(k);
    for (std::size_t s = 0; s < k; ++s) rows[q][perm[s]] = policy.row(q, s);
  }
  return AutomatonPolicy(k, policy.initial_state(),
                         std::vector<Action>(policy.actions().begin(), policy.actions().end()),
                         std::move(rows));
}

}  // namespace boundedrat
