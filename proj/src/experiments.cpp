#include "boundedrat/experiments.hpp"

namespace boundedrat::experiments {

RawSetting reference_raw_setting() { return {{0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4}, 1.0, -1.0, 0.001}; }

DynamicSetting reference_setting() { return validate_setting(reference_raw_setting()); }

Partition reference_partition() { return {{0}, {3}}; }

ScheduleSpec theorem1_schedule() { return {1.0, 2.0, 1.0, 1.0, {5, 10, 20, 40, 80}}; }

std::vector<std::uint64_t> mc_seeds() {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 1; i <= 20; ++i) s.push_back(i);
  return s;
}

AutomatonPolicy sticky_automaton() {
  const std::vector<double> left{1.0, 1.0, 1.0, 1.0, 0.01};
  const std::vector<double> right{0.01, 1.0, 1.0, 1.0, 1.0};
  return build_linear_sticky(5, left, right, 0, 3, 4);
}

std::vector<std::size_t> static_polarization_sequence() { return {0, 3, 3, 3}; }

std::vector<std::size_t> static_first_impression_sequence() { return {0, 0, 3, 3, 3}; }

StaticSetting reference_static_setting() {
  StaticSetting s;
  s.pG = {0.4, 0.3, 0.2, 0.1};
  s.pB = {0.1, 0.2, 0.3, 0.4};
  s.eta = 0.01;
  return s;
}

ReaderProblem reader_golden_problem() { return {20, 0.75, 0.01, 0.5}; }

ReaderProblem reader_first_impression_problem() { return {7, 0.9, 0.02, 0.5}; }

std::vector<int> reader_first_impression_sequence() { return {1, 1, 1, 0, 0, 0, 0}; }

ReaderProblem reader_polarization_problem(double prior1) { return {10, 0.8, 0.02, prior1}; }

std::vector<int> reader_polarization_sequence() { return {1, 1, 0, 0, 0, 0, 0, 0, 0, 0}; }

PrimalityConfig primality_config(std::uint64_t step_cap) {
  PrimalityConfig c;
  c.step_cap = step_cap;
  c.machines = {{MachineKind::AlwaysPass, 0},          {MachineKind::AlwaysPrime, 0},
                {MachineKind::AlwaysComposite, 0},     {MachineKind::TrialDivisionBudget, 1},
                {MachineKind::TrialDivisionBudget, 16}, {MachineKind::TrialDivisionBudget, 256},
                {MachineKind::TrialDivisionFull, 0}};
  return c;
}

}  // namespace boundedrat::experiments
