#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "boundedrat/automaton.hpp"
#include "boundedrat/bias_reader.hpp"
#include "boundedrat/costly_comp.hpp"
#include "boundedrat/dynamic_env.hpp"
#include "boundedrat/markov_exact.hpp"
#include "boundedrat/montecarlo.hpp"
#include "boundedrat/optimize.hpp"
#include "boundedrat/static_model.hpp"

// External documents number signals 1..k; the library uses 0..k-1.
namespace boundedrat::io {

using nlohmann::json;

// 12 significant digits.
std::string num(double x);

RawSetting raw_setting_from_json(const json& j, bool require_pi = true);
DynamicSetting setting_from_json(const json& j);
json setting_to_json(const DynamicSetting& s);

std::vector<std::size_t> signals_from_json(const json& j, std::size_t k);
json signals_to_json(const std::vector<std::size_t>& signals);

AFamilyParams a_family_from_json(const json& j, std::size_t k);

// {num_states, initial_state, actions, kernel: {"q:obs": {"next": prob}}}, obs = signal or "none".
json policy_to_json(const AutomatonPolicy& p);
AutomatonPolicy policy_from_json(const json& j);

json problem_to_json(const CompProblem& p);
CompProblem problem_from_json(const json& j);

// CSV renderers; all numbers via num().
std::string chain_csv(const JointChainModel& chain, const StationaryDist& dist);
std::string trace_csv(std::size_t N, double pi, const OptResult& r);
std::string curve_csv(const std::vector<CurvePoint>& curve);
std::string batches_csv(const SimResult& r);
std::string reader_table_csv(const ReaderDPTable& t);
// step, p_0..p_{M-1}, modal decision
std::string trajectory_csv(const std::vector<Distribution>& traj, const DecisionRule& rule);

}  // namespace boundedrat::io
