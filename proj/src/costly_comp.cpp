#include "boundedrat/costly_comp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boundedrat/error.hpp"

namespace boundedrat {

UtilityTable::UtilityTable(std::size_t states, std::size_t types, std::size_t actions)
    : states_(states), types_(types), actions_(actions), cells_(states * types * actions) {}

std::size_t UtilityTable::slot(std::size_t s, std::size_t t, std::size_t a) const {
  if (s >= states_ || t >= types_ || a >= actions_) {
    throw ModelError(ErrorCode::IndexOutOfRange, "utility index out of range");
  }
  return (s * types_ + t) * actions_ + a;
}

void UtilityTable::set(std::size_t s, std::size_t t, std::size_t a, std::uint64_t c, double value) {
  auto& cell = cells_[slot(s, t, a)];
  auto it = std::lower_bound(cell.begin(), cell.end(), c,
                             [](const auto& e, std::uint64_t key) { return e.first < key; });
  if (it != cell.end() && it->first == c) {
    it->second = value;
  } else {
    cell.insert(it, {c, value});
  }
}

std::optional<double> UtilityTable::get(std::size_t s, std::size_t t, std::size_t a,
                                        std::uint64_t c) const {
  const auto& cell = cells_[slot(s, t, a)];
  for (const auto& [cc, v] : cell) {
    if (cc == c) return v;
  }
  return std::nullopt;
}

std::vector<UtilityTable::Entry> UtilityTable::entries() const {
  std::vector<Entry> out;
  for (std::size_t s = 0; s < states_; ++s)
    for (std::size_t t = 0; t < types_; ++t)
      for (std::size_t a = 0; a < actions_; ++a)
        for (const auto& [c, v] : cells_[slot(s, t, a)]) out.push_back({s, t, a, c, v});
  return out;
}

void validate_problem(const CompProblem& p) {
  const std::size_t cells = p.states.size() * p.types.size();
  if (cells == 0 || p.actions.empty()) {
    throw ModelError(ErrorCode::BadParameter, "states, types and actions must be nonempty");
  }
  if (p.prior.size() != cells) throw ModelError(ErrorCode::DimensionMismatch, "prior must cover S x T");
  double sum = 0.0;
  for (double x : p.prior) {
    if (!(x >= 0.0)) throw ModelError(ErrorCode::NonStochastic, "negative prior entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ModelError(ErrorCode::NonStochastic, "prior does not sum to 1");
  if (p.utility.states() != p.states.size() || p.utility.types() != p.types.size() ||
      p.utility.actions() != p.actions.size()) {
    throw ModelError(ErrorCode::DimensionMismatch, "utility table shape differs from S x T x A");
  }
  for (const auto& m : p.machines) {
    if (m.out.size() != cells || m.complexity.size() != cells) {
      throw ModelError(ErrorCode::DimensionMismatch, "machine " + m.name + " tables must cover S x T");
    }
    for (auto a : m.out) {
      if (a >= p.actions.size()) throw ModelError(ErrorCode::IndexOutOfRange, "machine " + m.name + " outputs an unknown action");
    }
  }
}

double expected_utility(const CompProblem& problem, std::size_t machine_index) {
  if (machine_index >= problem.machines.size()) {
    throw ModelError(ErrorCode::IndexOutOfRange, "machine index out of range");
  }
  const auto& m = problem.machines[machine_index];
  double eu = 0.0;
  for (std::size_t s = 0; s < problem.states.size(); ++s) {
    for (std::size_t t = 0; t < problem.types.size(); ++t) {
      const std::size_t i = problem.cell(s, t);
      if (problem.prior[i] == 0.0) continue;
      const auto u = problem.utility.get(s, t, m.out[i], m.complexity[i]);
      if (!u) {
        throw ModelError(ErrorCode::MissingUtilityEntry,
                         "no utility for state " + problem.states[s] + ", type " + problem.types[t] +
                             ", action " + problem.actions[m.out[i]] + ", complexity " +
                             std::to_string(m.complexity[i]));
      }
      eu += problem.prior[i] * *u;
    }
  }
  return eu;
}

MachineChoiceResult best_machine(const CompProblem& problem) {
  if (problem.machines.empty()) throw ModelError(ErrorCode::NoMachines, "problem has no machines");
  MachineChoiceResult best{0, expected_utility(problem, 0)};
  for (std::size_t i = 1; i < problem.machines.size(); ++i) {
    const double v = expected_utility(problem, i);
    if (v > best.utility) best = {i, v};
  }
  return best;
}

double value_of_refinement(const CompProblem& before, const CompProblem& after) {
  return best_machine(after).utility - best_machine(before).utility;
}

std::string PrimalityMachine::name() const {
  switch (kind) {
    case MachineKind::AlwaysPass: return "always_pass";
    case MachineKind::AlwaysPrime: return "always_prime";
    case MachineKind::AlwaysComposite: return "always_composite";
    case MachineKind::TrialDivisionFull: return "trial_division_full";
    case MachineKind::TrialDivisionBudget: return "trial_division_budget:" + std::to_string(budget);
  }
  return "unknown";
}

PrimalityMachine PrimalityMachine::parse(const std::string& text) {
  if (text == "always_pass") return {MachineKind::AlwaysPass, 0};
  if (text == "always_prime") return {MachineKind::AlwaysPrime, 0};
  if (text == "always_composite") return {MachineKind::AlwaysComposite, 0};
  if (text == "trial_division_full") return {MachineKind::TrialDivisionFull, 0};
  const std::string prefix = "trial_division_budget:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    if (!num.empty() && std::all_of(num.begin(), num.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      return {MachineKind::TrialDivisionBudget, std::stoull(num)};
    }
  }
  throw ModelError(ErrorCode::BadConfig, "unknown machine '" + text + "'");
}

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<PrimalityRow> sieve_table(std::uint64_t bound) {
  std::vector<std::uint64_t> spf(bound + 1, 0);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= bound; j += i) {
      if (spf[j] == 0) spf[j] = i;
    }
  }
  std::vector<PrimalityRow> rows;
  rows.reserve(bound - 1);
  for (std::uint64_t t = 2; t <= bound; ++t) {
    const bool prime = spf[t] == t;
    rows.push_back({t, prime, prime ? isqrt(t) - 1 : spf[t] - 1});
  }
  return rows;
}

}  // namespace

std::vector<PrimalityRow> primality_table(std::uint64_t bound) {
  if (bound < 2) throw ModelError(ErrorCode::BadConfig, "type_bound must be >= 2");
  const char* dir = std::getenv("BOUNDEDRAT_CACHE_DIR");
  std::filesystem::path path;
  if (dir && *dir) {
    path = std::filesystem::path(dir) / ("primality_" + std::to_string(bound) + ".csv");
    std::ifstream in(path);
    if (in) {
      std::vector<PrimalityRow> rows;
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        PrimalityRow r{};
        char comma = 0;
        int prime = 0;
        if (ls >> r.t >> comma >> prime >> comma >> r.probes_full) {
          r.is_prime = prime != 0;
          rows.push_back(r);
        }
      }
      if (rows.size() == bound - 1) return rows;
    }
  }
  auto rows = sieve_table(bound);
  if (!path.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream outf(path);
    if (outf) {
      outf << "t,is_prime,probes_full\n";
      for (const auto& r : rows) outf << r.t << ',' << (r.is_prime ? 1 : 0) << ',' << r.probes_full << '\n';
    }
  }
  return rows;
}

TrialDivisionOutcome run_trial_division(const PrimalityRow& row, std::uint64_t budget) {
  if (row.probes_full <= budget) {
    return {row.is_prime ? kActionPrime : kActionComposite, row.probes_full};
  }
  return {kActionPass, budget};
}

CompProblem make_primality_instance(const PrimalityConfig& config) {
  if (config.type_bound < 2) throw ModelError(ErrorCode::BadConfig, "type_bound must be >= 2");
  const auto table = primality_table(config.type_bound);
  const std::size_t n_states = config.state_labels.size();
  if (config.state_prior.size() != n_states || n_states == 0) {
    throw ModelError(ErrorCode::BadConfig, "state_prior must match state_labels");
  }
  if (config.prime_truth) {
    if (config.prime_truth->size() != n_states) throw ModelError(ErrorCode::BadConfig, "prime_truth needs one row per state");
    for (const auto& r : *config.prime_truth) {
      if (r.size() != table.size()) throw ModelError(ErrorCode::BadConfig, "prime_truth rows must cover every type");
    }
  }

  CompProblem p;
  p.states = config.state_labels;
  p.actions = {"composite", "prime", "pass"};
  p.types.reserve(table.size());
  for (const auto& r : table) p.types.push_back(std::to_string(r.t));
  const std::size_t n_types = table.size();
  p.prior.resize(n_states * n_types);
  for (std::size_t s = 0; s < n_states; ++s)
    for (std::size_t t = 0; t < n_types; ++t)
      p.prior[p.cell(s, t)] = config.state_prior[s] / static_cast<double>(n_types);

  for (const auto& mc : config.machines) {
    MachineSpec m;
    m.name = mc.name();
    m.out.resize(n_states * n_types);
    m.complexity.resize(n_states * n_types);
    for (std::size_t t = 0; t < n_types; ++t) {
      TrialDivisionOutcome o{kActionPass, 0};
      switch (mc.kind) {
        case MachineKind::AlwaysPass: o = {kActionPass, 0}; break;
        case MachineKind::AlwaysPrime: o = {kActionPrime, 0}; break;
        case MachineKind::AlwaysComposite: o = {kActionComposite, 0}; break;
        case MachineKind::TrialDivisionBudget: o = run_trial_division(table[t], mc.budget); break;
        case MachineKind::TrialDivisionFull: o = run_trial_division(table[t], table[t].probes_full); break;
      }
      const std::uint64_t c = o.probes <= config.step_cap ? 0 : kLateCharge;
      for (std::size_t s = 0; s < n_states; ++s) {
        m.out[p.cell(s, t)] = o.action;
        m.complexity[p.cell(s, t)] = c;
      }
    }
    p.machines.push_back(std::move(m));
  }

  p.utility = UtilityTable(n_states, n_types, 3);
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t t = 0; t < n_types; ++t) {
      const bool prime = config.prime_truth ? (*config.prime_truth)[s][t] : table[t].is_prime;
      for (std::uint64_t c : {std::uint64_t{0}, kLateCharge}) {
        const auto cc = static_cast<double>(c);
        p.utility.set(s, t, kActionPrime, c, (prime ? 10.0 : -10.0) - cc);
        p.utility.set(s, t, kActionComposite, c, (prime ? -10.0 : 10.0) - cc);
        p.utility.set(s, t, kActionPass, c, 1.0 - cc);
      }
    }
  }
  return p;
}

double conversation_value(const ConversationSpec& spec) {
  if (spec.domain_size < 1) throw ModelError(ErrorCode::BadParameter, "domain_size must be >= 1");
  const double n = static_cast<double>(spec.domain_size);
  const double success = spec.questions >= 63 ? 1.0 : std::min(1.0, std::ldexp(1.0, static_cast<int>(spec.questions)) / n);
  return spec.payoff * success - spec.payoff / n;
}

}  // namespace boundedrat
