#pragma once

#include <cstdint>
#include <vector>

#include "boundedrat/automaton.hpp"
#include "boundedrat/bias_reader.hpp"
#include "boundedrat/costly_comp.hpp"
#include "boundedrat/dynamic_env.hpp"
#include "boundedrat/optimize.hpp"
#include "boundedrat/static_model.hpp"

// Committed configurations shared by `reproduce`, the acceptance suite and
// the fixtures under configs/.
namespace boundedrat::experiments {

// Four signals, pi = 0.001, xG = 1, xB = -1.
RawSetting reference_raw_setting();
DynamicSetting reference_setting();
// Pos = {signal 1}, Neg = {signal 4} (0-based {0}, {3}).
Partition reference_partition();

// pi(n) = 1/n^2, p_exp(n) = 1/n, n in {5, 10, 20, 40, 80}.
ScheduleSpec theorem1_schedule();

inline constexpr std::uint64_t kMcRounds = 1'000'000;
inline constexpr std::uint64_t kMcBatches = 20;
std::vector<std::uint64_t> mc_seeds();  // 1..20

// Five-state linear automaton over the reference signals reading signal 1 (G)
// and signal 4 (B), with escape probability 0.01 at both ends.
AutomatonPolicy sticky_automaton();
inline constexpr std::size_t kPolarizationStartA = 1;
inline constexpr std::size_t kPolarizationStartB = 2;
// One G signal then three B signals (0-based signal indices).
std::vector<std::size_t> static_polarization_sequence();
inline constexpr std::size_t kFirstImpressionStart = 2;
// Two G signals then three B signals.
std::vector<std::size_t> static_first_impression_sequence();
StaticSetting reference_static_setting();  // eta = 0.01, 1/0 utility, prior 1/2

ReaderProblem reader_golden_problem();  // n = 20, rho = 0.75, c = 0.01
ReaderProblem reader_first_impression_problem();  // n = 7, rho = 0.9, c = 0.02
std::vector<int> reader_first_impression_sequence();  // 1,1,1,0,0,0,0
ReaderProblem reader_polarization_problem(double prior1);  // n = 10, rho = 0.8, c = 0.02
inline constexpr double kPolarizationPriorA = 0.45;
inline constexpr double kPolarizationPriorB = 0.55;
std::vector<int> reader_polarization_sequence();  // 1,1 then eight 0s

// Type range 2..2^16, default cap, every machine kind with budgets 1, 16 and 256.
PrimalityConfig primality_config(std::uint64_t step_cap = std::uint64_t{1} << 8);

}  // namespace boundedrat::experiments
