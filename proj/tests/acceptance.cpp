// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "boundedrat/bias_reader.hpp"
#include "boundedrat/costly_comp.hpp"
#include "boundedrat/experiments.hpp"
#include "boundedrat/json_io.hpp"
#include "boundedrat/markov_exact.hpp"
#include "boundedrat/montecarlo.hpp"
#include "boundedrat/optimize.hpp"
#include "boundedrat/reproduce.hpp"
#include "boundedrat/static_model.hpp"
#include "oracles.hpp"

using namespace boundedrat;
namespace ex = boundedrat::experiments;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Outcome {
  bool pass;
  std::string detail;
};

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += "; over time limit " + io::num(limit_s) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Sweeps and curve shared by the bound and solver criteria.
std::vector<OptResult> sweeps;
std::vector<CurvePoint> curve;

CompProblem random_problem(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 5.0);
  const std::size_t S = 3, T = 4, A = 3;
  CompProblem p;
  for (std::size_t s = 0; s < S; ++s) p.states.push_back("s" + std::to_string(s));
  for (std::size_t t = 0; t < T; ++t) p.types.push_back("t" + std::to_string(t));
  for (std::size_t a = 0; a < A; ++a) p.actions.push_back("a" + std::to_string(a));
  p.prior.resize(S * T);
  double total = 0;
  for (auto& x : p.prior) total += x = unit(rng) + 1e-3;
  for (auto& x : p.prior) x /= total;
  p.utility = UtilityTable(S, T, A);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t a = 0; a < A; ++a)
        for (std::uint64_t c = 0; c < 4; ++c) p.utility.set(s, t, a, c, gauss(rng));
  for (int m = 0; m < 4; ++m) {
    MachineSpec spec{"m" + std::to_string(m), std::vector<std::size_t>(S * T), std::vector<std::uint64_t>(S * T)};
    for (std::size_t i = 0; i < S * T; ++i) spec.out[i] = rng() % A, spec.complexity[i] = rng() % 4;
    p.machines.push_back(spec);
  }
  return p;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const auto setting = ex::reference_setting();
  const auto part = ex::reference_partition();

  criterion(1, "five_state_payoff_above_0.4", 10, [&] {
    const auto r4 = optimize_pexp(setting, 4, part, 1, 1, log_grid());
    const auto r5 = optimize_pexp(setting, 5, part, 1, 1, log_grid());
    sweeps.push_back(r4);
    sweeps.push_back(r5);
    const bool pass = r4.best_payoff > 0.4 || r5.best_payoff > 0.4;
    const std::string which = r4.best_payoff > 0.4 ? "N=4 (5 states)" : (r5.best_payoff > 0.4 ? "N=5 (6 states)" : "none");
    return Outcome{pass, "N=4 " + io::num(r4.best_payoff) + " at p_exp " + io::num(r4.best_pexp) + ", N=5 " +
                             io::num(r5.best_payoff) + "; passing interpretation " + which};
  });

  criterion(2, "two_state_payoff_above_0.15", 5, [&] {
    const auto r1 = optimize_pexp(setting, 1, part, 1, 1, log_grid());
    sweeps.push_back(r1);
    return Outcome{r1.best_payoff > 0.15, "N=1 " + io::num(r1.best_payoff) + " at p_exp " + io::num(r1.best_pexp)};
  });

  criterion(3, "oracle_bound_0.5", 0, [&] {
    curve = theorem1_curve(ex::reference_raw_setting(), ex::theorem1_schedule(), part, 1, 1);
    double worst = -1e300;
    std::size_t count = 0;
    for (const auto& r : sweeps)
      for (const auto& g : r.grid_trace) worst = std::max(worst, g.payoff), ++count;
    for (const auto& c : curve) worst = std::max(worst, c.payoff), ++count;
    return Outcome{count > 0 && worst <= 0.5 + 1e-9, io::num(static_cast<double>(count)) + " payoffs, max " + io::num(worst)};
  });

  criterion(4, "theorem1_trend", 30, [&] {
    const auto curve = theorem1_curve(ex::reference_raw_setting(), ex::theorem1_schedule(), part, 1, 1);
    bool increasing = true;
    for (std::size_t i = 1; i < curve.size(); ++i) increasing = increasing && curve[i].payoff > curve[i - 1].payoff;
    const double g0 = 0.5 - curve.front().payoff, g1 = 0.5 - curve.back().payoff;
    const bool golden = io::curve_csv(curve) == slurp(default_golden_dir() / "theorem1_curve.csv");
    return Outcome{increasing && g1 <= 0.5 * g0 && golden,
                   std::string(increasing ? "strictly increasing" : "NOT increasing") + ", gap n=5 " + io::num(g0) +
                       ", gap n=80 " + io::num(g1) + (golden ? ", matches golden curve" : ", golden curve differs")};
  });

  criterion(5, "exact_vs_monte_carlo", 120, [&] {
    const auto policy = build_a_family(4, a_family(4, sweeps.at(0).best_pexp, part, 1, 1));
    const auto reports = seed_sweep(setting, policy, {ex::kMcRounds, std::nullopt, 1, ex::kMcBatches}, ex::mc_seeds(), workers());
    std::size_t outliers = 0;
    double worst = 0;
    for (const auto& r : reports) {
      outliers += std::abs(r.z) > 3;
      worst = std::max(worst, std::abs(r.z));
    }
    return Outcome{outliers <= 1 && reports.size() == 20,
                   io::num(static_cast<double>(outliers)) + " of 20 seeds with |z| > 3, max |z| " + io::num(worst)};
  });

  criterion(6, "stationary_solver", 0, [&] {
    double worst = 0;
    std::size_t chains = 0;
    std::vector<std::size_t> Ns{4, 5, 1};
    for (std::size_t i = 0; i < sweeps.size(); ++i)
      for (const auto& g : sweeps[i].grid_trace) {
        const auto chain = build_joint_chain(setting, build_a_family(4, a_family(Ns[i], g.p_exp, part, 1, 1)));
        worst = std::max(worst, stationary(chain).residual);
        ++chains;
      }
    for (const auto& c : curve) {
      auto raw = ex::reference_raw_setting();
      raw.pi = c.pi;
      const auto chain = build_joint_chain(validate_setting(raw), build_a_family(4, a_family(c.n, c.p_exp, part, 1, 1)));
      worst = std::max(worst, stationary(chain).residual);
      ++chains;
    }
    const double p_exp = sweeps.at(0).best_pexp;
    const auto mu = stationary(build_joint_chain(setting, build_a_family(4, a_family(4, p_exp, part, 1, 1)))).mu;
    const auto power = oracles::power_iteration(
        oracles::a_family_joint_chain({0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4}, 0.001, 4, p_exp, {0}, {3}, 1, 1),
        1'000'000);
    double diff = 0;
    for (int i = 0; i < 10; ++i) diff = std::max(diff, std::abs(mu(i) - power[i]));
    return Outcome{worst <= 1e-10 && diff <= 1e-8, io::num(static_cast<double>(chains)) + " chains, max residual " +
                                                       io::num(worst) + ", power-iteration gap " + io::num(diff)};
  });

  criterion(7, "robustness_fixed_pexp", 0, [&] {
    const double fixed = sweeps.at(0).best_pexp;
    std::ostringstream os;
    os << "total_states,N,payoff_fixed_pexp,payoff_own_optimum,gap\n";
    double worst = 0;
    for (std::size_t N = 4; N <= 9; ++N) {
      const double own = optimize_pexp(setting, N, part, 1, 1, log_grid(), workers()).best_payoff;
      const double at = exact_average_payoff(setting, build_a_family(4, a_family(N, fixed, part, 1, 1)));
      worst = std::max(worst, own - at);
      os << N + 1 << ',' << N << ',' << io::num(at) << ',' << io::num(own) << ',' << io::num(own - at) << '\n';
    }
    const bool golden = !diff_csv(slurp(default_golden_dir() / "robustness.csv"), os.str());
    return Outcome{worst <= 0.05 && golden,
                   "5..10 states, largest gap " + io::num(worst) + (golden ? ", matches golden" : ", golden differs")};
  });

  criterion(8, "reader_dp", 0, [&] {
    const auto p = ex::reader_golden_problem();
    const auto t = solve_reader_dp(p);
    bool monotone = true;
    for (std::size_t i = 0; i < p.n; ++i)
      for (int d = -static_cast<int>(i); d <= static_cast<int>(i); ++d)
        if (t.stop(i, d) && !t.stop(i + 1, d)) monotone = false;

    const double paths = oracles::reader_path_value(static_cast<int>(p.n), p.rho, p.c, p.prior1,
                                                    [&](int i, int d) { return t.stop(i, d); });
    const double gap = std::abs(t.W(0, 0) - paths);

    bool finite = true;
    std::string indices;
    std::mt19937_64 rng(8);
    for (int k = 1; k <= 10; ++k) {
      const ReaderProblem q{p.n, p.rho, 0.005 * k, p.prior1};
      const auto tq = solve_reader_dp(q);
      const auto idx = disregard_index(tq);
      indices += (k > 1 ? "," : "") + std::to_string(idx);
      finite = finite && idx <= q.n;
      for (int r = 0; r < 200; ++r) {
        std::vector<int> bits(q.n);
        for (auto& b : bits) b = static_cast<int>(rng() & 1);
        finite = finite && simulate_reader(q, tq, bits).reads <= idx;
      }
    }

    const auto fi = first_impression_reader(ex::reader_first_impression_problem(), ex::reader_first_impression_sequence());
    const ReaderProblem free{15, 0.75, 0.0, 0.5};
    std::size_t free_differs = 0;
    for (int r = 0; r < 10'000; ++r) {
      std::vector<int> bits(free.n);
      for (auto& b : bits) b = static_cast<int>(rng() & 1);
      free_differs += first_impression_reader(free, bits).differs;
    }
    const bool pass = monotone && gap <= 1e-10 && finite && fi.differs && free_differs == 0;
    return Outcome{pass, std::string("(a) boundary ") + (monotone ? "monotone" : "NOT monotone") + "; (b) W(0,0) " +
                             io::num(t.W(0, 0)) + " vs 2^20 paths, gap " + io::num(gap) + "; (c) disregard indices " +
                             indices + "; (d) witness 1110000 guesses " + std::to_string(fi.forward.guess) + "/" +
                             std::to_string(fi.reversed.guess) + ", c=0 n=15: " + std::to_string(free_differs) +
                             " of 10000 differ"};
  });

  criterion(9, "polarization", 0, [&] {
    const auto policy = ex::sticky_automaton();
    const auto rule = midpoint_rule(5);
    const auto stat = polarization_demo(policy, ex::kPolarizationStartA, ex::kPolarizationStartB,
                                        ex::static_polarization_sequence(), rule);
    const auto pa = ex::reader_polarization_problem(ex::kPolarizationPriorA);
    const auto pb = ex::reader_polarization_problem(ex::kPolarizationPriorB);
    const auto rd = polarization_reader(pa, pb, ex::reader_polarization_sequence());
    std::mt19937_64 rng(9);
    bool controls = true;
    for (int r = 0; r < 1000; ++r) {
      std::vector<std::size_t> seq(rng() % 12);
      for (auto& s : seq) s = rng() % 4;
      const std::size_t st = rng() % 5;
      controls = controls && !polarization_demo(policy, st, st, seq, rule).diverged;
      std::vector<int> bits(pa.n);
      for (auto& b : bits) b = static_cast<int>(rng() & 1);
      controls = controls && !polarization_reader(pa, pa, bits).diverged && !polarization_reader(pb, pb, bits).diverged;
    }
    return Outcome{stat.diverged && rd.diverged && controls,
                   std::string("static ") + (stat.diverged ? "diverged" : "did not diverge") + ", reader " +
                       (rd.diverged ? "diverged" : "did not diverge") + ", controls " + (controls ? "clean" : "DIVERGED")};
  });

  criterion(10, "costly_computation", 0, [&] {
    std::mt19937_64 rng(10);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      const auto p = random_problem(rng);
      for (std::size_t m = 0; m < p.machines.size(); ++m) {
        std::vector<double> terms;
        for (std::size_t s = 0; s < p.states.size(); ++s)
          for (std::size_t t = 0; t < p.types.size(); ++t) {
            const auto cell = p.cell(s, t);
            terms.push_back(p.prior[cell] * *p.utility.get(s, t, p.machines[m].out[cell], p.machines[m].complexity[cell]));
          }
        worst = std::max(worst, std::abs(expected_utility(p, m) - oracles::reversed_kahan(terms)));
      }
    }
    bool best_ok = true;
    std::string winners;
    for (std::uint64_t cap : {std::uint64_t{1}, std::uint64_t{16}, std::uint64_t{256}}) {
      const auto q = make_primality_instance(ex::primality_config(cap));
      std::size_t arg = 0;
      for (std::size_t m = 1; m < q.machines.size(); ++m)
        if (expected_utility(q, m) > expected_utility(q, arg)) arg = m;
      best_ok = best_ok && best_machine(q).index == arg;
      winners += (cap > 1 ? "," : "") + q.machines[arg].name;
    }
    const double conv = conversation_value({100, 7, 100});
    return Outcome{worst <= 1e-12 && best_ok && conv == 99.0,
                   "max EU gap " + io::num(worst) + " over 100 problems; best machines " + winners +
                       "; conversation_value(100,7,100) = " + io::num(conv)};
  });

  criterion(11, "determinism", 0, [&] {
    const auto base = fs::temp_directory_path() / "boundedrat_acceptance";
    fs::remove_all(base);
    ReproduceOptions a{base / "a", default_golden_dir(), workers()};
    ReproduceOptions b{base / "b", default_golden_dir(), 1};
    const auto ra = reproduce(a);
    const auto rb = reproduce(b);
    std::size_t files = 0, differ = 0;
    for (const auto& e : fs::directory_iterator(a.out_dir)) {
      ++files;
      if (slurp(e.path()) != slurp(b.out_dir / e.path().filename())) ++differ;
    }
    const double total = std::chrono::duration<double>(Clock::now() - start).count();
    fs::remove_all(base);
    const bool pass = ra.ok() && rb.ok() && differ == 0 && files > 0 && total <= 300;
    return Outcome{pass, std::to_string(files) + " files, " + std::to_string(differ) + " differ between runs; golden " +
                             (ra.ok() && rb.ok() ? "match" : "MISMATCH") + "; suite time so far " + io::num(total) + " s"};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
