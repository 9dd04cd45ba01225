#include "boundedrat/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "boundedrat/error.hpp"
#include "boundedrat/markov_exact.hpp"
#include "boundedrat/parallel.hpp"

namespace boundedrat {

std::vector<double> log_grid(std::size_t points, double lo, double hi) {
  if (points == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw ModelError(ErrorCode::BadParameter, "log grid needs points > 0 and 0 < lo <= hi");
  }
  if (points == 1) return {hi};
  std::vector<double> g(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

Partition default_partition(const DynamicSetting& setting) {
  if (!is_nontrivial(setting)) {
    throw ModelError(ErrorCode::TrivialSetting, "no signal distinguishes G from B");
  }
  const auto pG = setting.pG();
  const auto pB = setting.pB();
  // ratio(i) = num[i] / den[i]; compare by cross-multiplication so den = 0 is +inf.
  auto argmax_ratio = [&](std::span<const double> num, std::span<const double> den) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (num[i] == 0.0) continue;
      if (!best || num[i] * den[*best] > num[*best] * den[i]) best = i;
    }
    return *best;
  };
  return Partition{{argmax_ratio(pG, pB)}, {argmax_ratio(pB, pG)}};
}

AFamilyParams a_family(std::size_t N, double p_exp, const Partition& part, double r_u, double r_d) {
  return AFamilyParams{N, p_exp, part.pos, part.neg, r_u, r_d};
}

OptResult optimize_pexp(const DynamicSetting& setting, std::size_t N, const Partition& partition,
                        double r_u, double r_d, const std::vector<double>& grid,
                        std::size_t workers) {
  if (grid.empty()) throw ModelError(ErrorCode::BadParameter, "p_exp grid is empty");
  for (double p : grid) {
    if (!(p > 0.0 && p <= 1.0)) throw ModelError(ErrorCode::BadProbability, "p_exp grid point outside (0,1]");
  }
  validate_a_family(setting.k(), a_family(N, 1.0, partition, r_u, r_d));

  OptResult res;
  res.partition_used = partition;
  res.r_u = r_u;
  res.r_d = r_d;
  auto evaluate = [&](const std::vector<double>& pts) {
    const auto vals = parallel_map(pts.size(), workers, [&](std::size_t i) {
      return exact_average_payoff(setting, build_a_family(setting.k(), a_family(N, pts[i], partition, r_u, r_d)));
    });
    for (std::size_t i = 0; i < pts.size(); ++i) {
      res.grid_trace.push_back({pts[i], vals[i]});
      if (res.grid_trace.size() == 1 || vals[i] > res.best_payoff) {
        res.best_payoff = vals[i];
        res.best_pexp = pts[i];
      }
    }
  };
  evaluate(grid);

  for (int round = 0; round < 2; ++round) {
    std::set<double> seen;
    for (const auto& g : res.grid_trace) seen.insert(g.p_exp);
    auto it = seen.find(res.best_pexp);
    const double lo = it == seen.begin() ? res.best_pexp / 2.0 : *std::prev(it);
    const double hi = std::next(it) == seen.end() ? std::min(1.0, res.best_pexp * 2.0) : *std::next(it);
    if (!(hi > lo)) break;
    std::vector<double> pts;
    for (int j = 1; j <= 10; ++j) pts.push_back(lo + (hi - lo) * j / 11.0);
    evaluate(pts);
  }
  return res;
}

const std::vector<double>& rate_grid() {
  static const std::vector<double> g{0.2, 0.4, 0.6, 0.8, 1.0};
  return g;
}

OptResult exhaustive_partition_search(const DynamicSetting& setting, std::size_t N, double r_u,
                                      double r_d, const std::vector<double>& grid,
                                      std::size_t workers, bool search_rates) {
  const std::size_t k = setting.k();
  if (k > 6) throw ModelError(ErrorCode::TooManySignals, "exhaustive search supports k <= 6");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;

  std::vector<Partition> parts;
  for (std::size_t code = 0; code < total; ++code) {
    Partition p;
    std::size_t c = code;
    for (std::size_t s = 0; s < k; ++s, c /= 3) {
      if (c % 3 == 1) p.pos.push_back(s);
      if (c % 3 == 2) p.neg.push_back(s);
    }
    if (!p.pos.empty() && !p.neg.empty()) parts.push_back(std::move(p));
  }
  std::vector<std::pair<double, double>> rates{{r_u, r_d}};
  if (search_rates) {
    rates.clear();
    for (double u : rate_grid())
      for (double d : rate_grid()) rates.emplace_back(u, d);
  }

  std::optional<OptResult> best;
  for (const auto& part : parts) {
    for (const auto& [u, d] : rates) {
      try {
        auto r = optimize_pexp(setting, N, part, u, d, grid, workers);
        if (!best || r.best_payoff > best->best_payoff) best = std::move(r);
      } catch (const ModelError& e) {
        if (e.code() != ErrorCode::Reducible) throw;
      }
    }
  }
  if (!best) throw ModelError(ErrorCode::Reducible, "every partition gives a reducible chain");
  return *best;
}

double ScheduleSpec::pi_of(std::size_t n) const {
  return pi_c / std::pow(static_cast<double>(n), pi_a);
}

double ScheduleSpec::pexp_of(std::size_t n) const {
  return pexp_c / std::pow(static_cast<double>(n), pexp_b);
}

bool ScheduleSpec::limit_hypothesis_holds() const {
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    const auto a = n_list[i - 1];
    const auto b = n_list[i];
    if (!(b * pi_of(b) < a * pi_of(a))) return false;
    if (!(pi_of(b) / pexp_of(b) < pi_of(a) / pexp_of(a))) return false;
  }
  return true;
}

std::vector<CurvePoint> theorem1_curve(const RawSetting& base, const ScheduleSpec& schedule,
                                       const Partition& partition, double r_u, double r_d,
                                       bool require_hypothesis, std::size_t workers) {
  if (!(schedule.pi_c > 0.0 && schedule.pexp_c > 0.0)) {
    throw ModelError(ErrorCode::BadParameter, "schedule constants must be positive");
  }
  for (std::size_t i = 0; i < schedule.n_list.size(); ++i) {
    if (schedule.n_list[i] == 0 || (i > 0 && schedule.n_list[i] <= schedule.n_list[i - 1])) {
      throw ModelError(ErrorCode::BadParameter, "n_list must be positive and strictly increasing");
    }
  }
  if (require_hypothesis && !schedule.limit_hypothesis_holds()) {
    throw ModelError(ErrorCode::BadParameter,
                     "schedule violates n*pi(n) -> 0 or pi(n)/p_exp(n) -> 0 along n_list");
  }
  return parallel_map(schedule.n_list.size(), workers, [&](std::size_t i) {
    const std::size_t n = schedule.n_list[i];
    RawSetting raw = base;
    raw.pi = schedule.pi_of(n);
    const double pexp = schedule.pexp_of(n);
    if (!(pexp > 0.0 && pexp <= 1.0)) {
      throw ModelError(ErrorCode::BadParameter, "p_exp(" + std::to_string(n) + ") outside (0,1]");
    }
    const auto setting = validate_setting(raw);
    const double v = exact_average_payoff(
        setting, build_a_family(setting.k(), a_family(n, pexp, partition, r_u, r_d)));
    return CurvePoint{n, raw.pi, pexp, v};
  });
}

namespace {

// Kernel rows mixing stay/up/down with grid weights summing to 1.
std::vector<KernelRow> row_options(std::size_t q, std::size_t M, const std::vector<double>& grid) {
  std::vector<std::size_t> targets{q};
  if (q + 1 < M) targets.push_back(q + 1);
  if (q > 0) targets.push_back(q - 1);
  std::vector<KernelRow> out;
  std::vector<std::size_t> idx(targets.size(), 0);
  while (true) {
    double sum = 0.0;
    for (auto i : idx) sum += grid[i];
    if (std::abs(sum - 1.0) <= 1e-12) {
      KernelRow row;
      for (std::size_t j = 0; j < targets.size(); ++j) {
        if (grid[idx[j]] > 0.0) row.push_back({targets[j], grid[idx[j]]});
      }
      out.push_back(std::move(row));
    }
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == grid.size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return out;
}

}  // namespace

std::size_t count_policy_candidates(std::size_t k, std::size_t M, const std::vector<double>& prob_grid) {
  if (M < 1 || M > 3) throw ModelError(ErrorCode::BadParameter, "policy search supports 1..3 states");
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << M); ++mask) {
    double c = 1.0;
    for (std::size_t q = 0; q < M; ++q) {
      const bool risky = (mask >> q) & 1;
      c *= std::pow(static_cast<double>(row_options(q, M, prob_grid).size()),
                    static_cast<double>(risky ? k : 1));
    }
    total += c;
  }
  if (total > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    return std::numeric_limits<std::size_t>::max() / 2;
  }
  return static_cast<std::size_t>(total);
}

PolicySearchResult brute_force_policy_search(const DynamicSetting& setting, std::size_t M,
                                             const std::vector<double>& prob_grid) {
  const std::size_t k = setting.k();
  const std::size_t candidates = count_policy_candidates(k, M, prob_grid);
  if (candidates > kPolicySearchCap) {
    throw ModelError(ErrorCode::GridTooLarge, std::to_string(candidates) + " candidates exceed the cap of " +
                                                  std::to_string(kPolicySearchCap));
  }
  std::vector<std::vector<KernelRow>> options(M);
  for (std::size_t q = 0; q < M; ++q) options[q] = row_options(q, M, prob_grid);

  std::optional<PolicySearchResult> best;
  std::size_t evaluated = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << M); ++mask) {
    std::vector<Action> actions(M);
    // slot -> (state, observation index)
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t q = 0; q < M; ++q) {
      actions[q] = ((mask >> q) & 1) ? Action::Risky : Action::Safe;
      const std::size_t n_obs = actions[q] == Action::Risky ? k : 1;
      for (std::size_t o = 0; o < n_obs; ++o) slots.emplace_back(q, o);
    }
    std::vector<std::size_t> choice(slots.size(), 0);
    while (true) {
      std::vector<std::vector<KernelRow>> rows(M);
      for (std::size_t q = 0; q < M; ++q) rows[q].resize(actions[q] == Action::Risky ? k : 1);
      for (std::size_t j = 0; j < slots.size(); ++j) {
        rows[slots[j].first][slots[j].second] = options[slots[j].first][choice[j]];
      }
      AutomatonPolicy policy(k, 0, actions, std::move(rows));
      const auto chain = build_joint_chain(setting, policy);
      if (unreachable_states(chain.P).empty()) {
        ++evaluated;
        const double v = exact_average_payoff(chain, stationary(chain));
        if (!best || v > best->payoff) best = PolicySearchResult{std::move(policy), v, candidates, 0};
      }
      std::size_t j = 0;
      while (j < choice.size() && ++choice[j] == options[slots[j].first].size()) choice[j++] = 0;
      if (j == choice.size()) break;
    }
  }
  if (!best) throw ModelError(ErrorCode::Reducible, "no irreducible candidate policy");
  best->evaluated = evaluated;
  return *best;
}

}  // namespace boundedrat
