#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "boundedrat/automaton.hpp"

namespace boundedrat {

enum class Decision { G = 0, B = 1 };

// Static-nature decision problem with a geometric deadline: each round the
// agent sees one signal, then the game ends w.p. eta and the decision is read
// from the automaton state.
struct StaticSetting {
  std::vector<double> pG;
  std::vector<double> pB;
  double eta = 0.01;
  // utility[decision][truth], indices 0 = G, 1 = B.
  std::array<std::array<double, 2>, 2> utility{{{1.0, 0.0}, {0.0, 1.0}}};
  double prior_G = 0.5;

  std::size_t k() const noexcept { return pG.size(); }
};

// Throws NonStochastic, DimensionMismatch, BadEta, BadProbability.
void validate_static_setting(const StaticSetting& setting);

struct DecisionRule {
  std::vector<Decision> decide;  // one entry per automaton state
};

// G for the lower half of the states, B for the upper half; the middle state of
// an odd-sized automaton decides G.
DecisionRule midpoint_rule(std::size_t num_states);

double static_expected_utility(const StaticSetting& setting, const AutomatonPolicy& policy,
                               const DecisionRule& rule);

using Distribution = std::vector<double>;

// Distributions after each prefix of `sequence`, starting with the point mass
// at `start` (size = sequence.size() + 1). Signals are 0-based.
std::vector<Distribution> propagate_sequence(const AutomatonPolicy& policy, std::size_t start,
                                             const std::vector<std::size_t>& sequence);

struct DecisionMass {
  double g = 0.0;
  double b = 0.0;
  Decision modal() const noexcept { return g >= b ? Decision::G : Decision::B; }
};

DecisionMass decision_mass(const Distribution& dist, const DecisionRule& rule);

struct PolarizationOutcome {
  std::vector<Distribution> trajectory_a;
  std::vector<Distribution> trajectory_b;
  DecisionMass decision_a;
  DecisionMass decision_b;
  bool diverged = false;  // modal decisions differ
};

PolarizationOutcome polarization_demo(const AutomatonPolicy& policy, std::size_t start_a,
                                      std::size_t start_b, const std::vector<std::size_t>& sequence,
                                      const DecisionRule& rule);

struct FirstImpressionOutcome {
  std::vector<Distribution> trajectory_forward;
  std::vector<Distribution> trajectory_reversed;
  DecisionMass decision_forward;
  DecisionMass decision_reversed;
  bool order_sensitive = false;
};

FirstImpressionOutcome first_impression_demo(const AutomatonPolicy& policy, std::size_t start,
                                             const std::vector<std::size_t>& sequence,
                                             const DecisionRule& rule);

}  // namespace boundedrat
