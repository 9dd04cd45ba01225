#include <doctest.h>

#include <fstream>
#include <random>

#include "boundedrat/error.hpp"
#include "boundedrat/experiments.hpp"
#include "boundedrat/json_io.hpp"

using namespace boundedrat;
using nlohmann::json;
namespace ex = boundedrat::experiments;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(BOUNDEDRAT_SOURCE_DIR "/configs/") + name);
  REQUIRE(in.good());
  return json::parse(in);
}

void check_same_policy(const AutomatonPolicy& a, const AutomatonPolicy& b) {
  REQUIRE(a.num_states() == b.num_states());
  CHECK(a.num_signals() == b.num_signals());
  CHECK(a.initial_state() == b.initial_state());
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    CHECK(a.action(q) == b.action(q));
    const std::size_t count = consumes_signals(a.action(q)) ? a.num_signals() : 1;
    for (std::size_t o = 0; o < count; ++o) {
      const Observation obs = consumes_signals(a.action(q)) ? Observation{o} : kNoSignal;
      for (std::size_t to = 0; to < a.num_states(); ++to) CHECK(a.prob(q, obs, to) == b.prob(q, obs, to));
    }
  }
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(io::num(0.0) == "0");
  CHECK(io::num(-0.0) == "0");
  CHECK(io::num(99.0) == "99");
  CHECK(io::num(0.1) == "0.1");
  CHECK(io::num(1.0 / 3.0) == "0.333333333333");
  CHECK(io::num(2.5e-7) == "2.5e-07");
}

TEST_CASE("settings and signals use 1-based numbering outside the library") {
  const auto s = io::setting_from_json(load("reference_setting.json"));
  CHECK(s.raw().pG == ex::reference_raw_setting().pG);
  CHECK(s.raw().pB == ex::reference_raw_setting().pB);
  CHECK(s.pi() == ex::reference_raw_setting().pi);
  CHECK(io::setting_from_json(io::setting_to_json(s)).raw().pG == s.raw().pG);

  CHECK(io::signals_from_json(json::array({1, 4}), 4) == std::vector<std::size_t>{0, 3});
  CHECK(io::signals_to_json({0, 3}) == json::array({1, 4}));
  CHECK_THROWS_AS(io::signals_from_json(json::array({0}), 4), ModelError);
  CHECK_THROWS_AS(io::signals_from_json(json::array({5}), 4), ModelError);

  auto bad = load("reference_setting.json");
  bad["k"] = 3;
  CHECK_THROWS_AS(io::setting_from_json(bad), ModelError);
  bad = load("reference_setting.json");
  bad.erase("pi");
  CHECK_THROWS(io::setting_from_json(bad));
  CHECK_NOTHROW(io::raw_setting_from_json(bad, false));
}

TEST_CASE("policy JSON round trip") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng() % 4;
    const std::size_t N = 1 + rng() % 6;
    const AFamilyParams params{N, 0.01 + 0.9 * static_cast<double>(rng() % 100) / 100.0, {0}, {k - 1},
                               0.1 + 0.9 * static_cast<double>(rng() % 10) / 10.0, 1.0};
    const auto p = build_a_family(k, params);
    check_same_policy(p, io::policy_from_json(io::policy_to_json(p)));
    check_same_policy(p, io::policy_from_json(json::parse(io::policy_to_json(p).dump())));
  }
  const auto sticky = ex::sticky_automaton();
  check_same_policy(sticky, io::policy_from_json(io::policy_to_json(sticky)));
  CHECK(io::policy_to_json(sticky)["kernel"].contains("0:4"));
}

TEST_CASE("malformed policy JSON") {
  auto j = io::policy_to_json(build_a_family(2, {1, 0.5, {0}, {1}, 1, 1}));
  auto bad = j;
  bad["kernel"]["0:1"] = {{"1", 1.0}};
  CHECK_THROWS_AS(io::policy_from_json(bad), ModelError);
  bad = j;
  bad["kernel"]["7:1"] = {{"1", 1.0}};
  CHECK_THROWS_AS(io::policy_from_json(bad), ModelError);
  bad = j;
  bad["kernel"]["1:1"] = {{"1", 0.5}};
  CHECK_THROWS_AS(io::policy_from_json(bad), ModelError);
  bad = j;
  bad["actions"] = {"safe", "flying"};
  CHECK_THROWS_AS(io::policy_from_json(bad), ModelError);
}

TEST_CASE("machine problem JSON round trip") {
  const auto p = io::problem_from_json(load("machine_small.json").at("problem"));
  CHECK(expected_utility(p, 0) == doctest::Approx(5.0));
  CHECK(expected_utility(p, 1) == doctest::Approx(0.0));
  const auto q = io::problem_from_json(io::problem_to_json(p));
  CHECK(q.states == p.states);
  for (std::size_t m = 0; m < p.machines.size(); ++m) CHECK(expected_utility(q, m) == expected_utility(p, m));
}

TEST_CASE("fixtures agree with the committed experiment constants") {
  const auto a = io::a_family_from_json(load("eval_exact.json")["automaton"]["a_family"], 4);
  CHECK(a.pos == ex::reference_partition().pos);
  CHECK(a.neg == ex::reference_partition().neg);
  CHECK(a.N == 4);

  const auto t1 = load("theorem1.json")["schedule"];
  const auto sched = ex::theorem1_schedule();
  CHECK(t1["pi_c"].get<double>() == sched.pi_c);
  CHECK(t1["pi_a"].get<double>() == sched.pi_a);
  CHECK(t1["pexp_b"].get<double>() == sched.pexp_b);
  CHECK(t1["n_list"].get<std::vector<std::size_t>>() == sched.n_list);

  const auto pol = load("static_polarization.json");
  CHECK(io::signals_from_json(pol["sequence"], 4) == ex::static_polarization_sequence());
  CHECK(pol["start_a"].get<std::size_t>() == ex::kPolarizationStartA);
  CHECK(pol["start_b"].get<std::size_t>() == ex::kPolarizationStartB);
  const auto fi = load("static_first_impression.json");
  CHECK(io::signals_from_json(fi["sequence"], 4) == ex::static_first_impression_sequence());
  CHECK(fi["start"].get<std::size_t>() == ex::kFirstImpressionStart);

  const auto rfi = load("reader_first_impression.json");
  CHECK(rfi["sequence"].get<std::vector<int>>() == ex::reader_first_impression_sequence());
  CHECK(rfi["rho"].get<double>() == ex::reader_first_impression_problem().rho);
  const auto rpol = load("reader_polarization.json");
  CHECK(rpol["sequence"].get<std::vector<int>>() == ex::reader_polarization_sequence());
  CHECK(rpol["prior1"].get<double>() == ex::kPolarizationPriorA);
  CHECK(rpol["prior1_b"].get<double>() == ex::kPolarizationPriorB);
}

TEST_CASE("CSV renderers") {
  const auto t = solve_reader_dp({2, 0.75, 0.0, 0.5});
  const auto csv = io::reader_table_csv(t);
  CHECK(csv.rfind("i,d,W,stop\n0,0,", 0) == 0);

  SimResult r;
  r.batch_means = {0.5, 0.25};
  r.mean = 0.375;
  r.std_error = 0.125;
  const auto b = io::batches_csv(r);
  CHECK(b.find("batch,mean\n0,0.5\n1,0.25\n") == 0);
  CHECK(b.find("0.375") != std::string::npos);

  const std::vector<CurvePoint> curve{{5, 0.04, 0.2, 0.15}};
  CHECK(io::curve_csv(curve) == "n,pi,p_exp,payoff\n5,0.04,0.2,0.15\n");
}
