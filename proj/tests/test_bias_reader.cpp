#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "boundedrat/bias_reader.hpp"
#include "boundedrat/error.hpp"
#include "boundedrat/experiments.hpp"
#include "boundedrat/json_io.hpp"
#include "oracles.hpp"

using namespace boundedrat;
namespace ex = boundedrat::experiments;

namespace {

// Value of reading every signal: sum over the number of ones.
double full_information_value(const ReaderProblem& p) {
  const int n = static_cast<int>(p.n);
  double total = 0.0;
  for (int a = 0; a <= n; ++a) {
    const double ways = std::exp(std::lgamma(n + 1.0) - std::lgamma(a + 1.0) - std::lgamma(n - a + 1.0));
    const double l1 = p.prior1 * std::pow(p.rho, a) * std::pow(1 - p.rho, n - a);
    const double l0 = (1 - p.prior1) * std::pow(1 - p.rho, a) * std::pow(p.rho, n - a);
    total += ways * std::max(l1, l0);
  }
  return total;
}

std::vector<int> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> bits(n);
  for (auto& b : bits) b = static_cast<int>(rng() & 1);
  return bits;
}

}  // namespace

TEST_CASE("posterior closed forms") {
  const ReaderProblem p{20, 0.75, 0.01, 0.5};
  CHECK(posterior(p, 0) == 0.5);
  CHECK(posterior(p, 1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(posterior(p, -2) == doctest::Approx(0.1).epsilon(1e-14));
  const ReaderProblem skew{5, 0.8, 0.0, 0.3};
  CHECK(posterior(skew, 0) == 0.3);
  CHECK(posterior(skew, 2) == doctest::Approx(0.3 * 16 / (0.3 * 16 + 0.7)).epsilon(1e-14));
  // far tails stay finite
  const ReaderProblem sharp{2000, 0.99, 0.0, 0.5};
  CHECK(posterior(sharp, 2000) == 1.0);
  CHECK(posterior(sharp, -2000) >= 0.0);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(validate_reader({10, 0.5, 0.01, 0.5}), ModelError);
  CHECK_THROWS_AS(validate_reader({10, 1.0, 0.01, 0.5}), ModelError);
  CHECK_THROWS_AS(validate_reader({10, 0.7, -0.01, 0.5}), ModelError);
  CHECK_THROWS_AS(validate_reader({10, 0.7, 0.01, 0.0}), ModelError);
  CHECK_NOTHROW(validate_reader({0, 0.7, 0.01, 0.5}));
}

TEST_CASE("table terminal and stopping values") {
  const ReaderProblem p{12, 0.7, 0.015, 0.4};
  const auto t = solve_reader_dp(p);
  for (std::size_t i = 0; i <= p.n; ++i)
    for (int d = -static_cast<int>(i); d <= static_cast<int>(i); d += 2) {
      const double post = posterior(p, d);
      if (i == p.n) CHECK(t.stop(i, d));
      if (t.stop(i, d)) CHECK(t.W(i, d) == doctest::Approx(std::max(post, 1 - post)).epsilon(1e-14));
      else CHECK(t.W(i, d) > std::max(post, 1 - post));
    }
}

TEST_CASE("golden problem against the path and count oracles") {
  const auto p = ex::reader_golden_problem();
  const auto t = solve_reader_dp(p);
  CHECK(std::abs(t.W(0, 0) - 0.9081509622) <= 1e-10);
  const double paths = oracles::reader_path_value(static_cast<int>(p.n), p.rho, p.c, p.prior1,
                                                  [&](int i, int d) { return t.stop(i, d); });
  CHECK(std::abs(t.W(0, 0) - paths) <= 1e-10);
  CHECK(std::abs(t.W(0, 0) - oracles::reader_counts_dp(static_cast<int>(p.n), p.rho, p.c, p.prior1)) <= 1e-10);

  std::ifstream in(BOUNDEDRAT_SOURCE_DIR "/golden/reader_table.csv");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(io::reader_table_csv(t) == ss.str());
}

TEST_CASE("count oracle agrees across problems") {
  for (const ReaderProblem p : {ReaderProblem{9, 0.6, 0.002, 0.5}, ReaderProblem{14, 0.85, 0.03, 0.35},
                                ReaderProblem{16, 0.7, 0.0, 0.6}, ReaderProblem{11, 0.95, 0.1, 0.5}}) {
    const auto t = solve_reader_dp(p);
    CHECK(std::abs(t.W(0, 0) - oracles::reader_counts_dp(static_cast<int>(p.n), p.rho, p.c, p.prior1)) <= 1e-12);
  }
}

TEST_CASE("free signals are worth reading in full") {
  for (std::size_t n : {1, 6, 15, 20}) {
    const ReaderProblem p{n, 0.75, 0.0, 0.5};
    CHECK(solve_reader_dp(p).W(0, 0) == doctest::Approx(full_information_value(p)).epsilon(1e-12));
  }
}

TEST_CASE("reading never pays once cost exceeds the best one-step gain") {
  for (double rho : {0.6, 0.75, 0.9})
    for (double extra : {0.0, 0.01, 0.3}) {
      const ReaderProblem p{10, rho, rho - 0.5 + extra, 0.5};
      const auto t = solve_reader_dp(p);
      CHECK(t.stop(0, 0));
      std::mt19937_64 rng(1);
      CHECK(simulate_reader(p, t, random_bits(rng, 10)).reads == 0);
    }
}

TEST_CASE("table structure properties") {
  for (double c : {0.001, 0.01, 0.05}) {
    const ReaderProblem p{30, 0.7, c, 0.5};
    const auto t = solve_reader_dp(p);
    for (std::size_t i = 0; i < p.n; ++i)
      for (int d = -static_cast<int>(i); d <= static_cast<int>(i); ++d) {
        if (t.stop(i, d)) CHECK(t.stop(i + 1, d));
        CHECK(std::abs(t.W(i, d) - t.W(i, -d)) <= 1e-12);
      }
  }
  double last = 2.0;
  for (int k = 0; k <= 20; ++k) {
    const double w = solve_reader_dp({20, 0.75, 0.015 * k, 0.5}).W(0, 0);
    CHECK(w <= last + 1e-12);
    last = w;
  }
}

TEST_CASE("disregard index exists and bounds every run") {
  std::mt19937_64 rng(4);
  for (int k = 1; k <= 10; ++k) {
    const ReaderProblem p{20, 0.75, 0.003 * k, 0.5};
    const auto t = solve_reader_dp(p);
    const auto idx = disregard_index(t);
    CHECK(idx <= p.n);
    for (int r = 0; r < 100; ++r) CHECK(simulate_reader(p, t, random_bits(rng, p.n)).reads <= idx);
  }
}

TEST_CASE("stopping boundary does not depend on a long horizon") {
  // the end of the horizon pulls the boundary in only during the last dozen reads
  const auto near = solve_reader_dp({20, 0.75, 0.01, 0.5});
  const auto mid = solve_reader_dp({40, 0.75, 0.01, 0.5});
  const auto far = solve_reader_dp({200, 0.75, 0.01, 0.5});
  for (std::size_t i = 0; i <= 8; ++i) CHECK(stop_threshold(near, i) == stop_threshold(far, i));
  for (std::size_t i = 0; i <= 28; ++i) CHECK(stop_threshold(mid, i) == stop_threshold(far, i));
  CHECK(stop_threshold(near, 19) < stop_threshold(far, 19));
  CHECK(stop_threshold(far, 0) == std::numeric_limits<int>::max());
  CHECK(stop_threshold(far, 7) < std::numeric_limits<int>::max());
}

TEST_CASE("simulation basics") {
  const ReaderProblem lean1{6, 0.7, 0.5, 0.7};
  const auto r1 = simulate_reader(lean1, solve_reader_dp(lean1), {0, 0, 0, 0, 0, 0});
  CHECK(r1.reads == 0);
  CHECK(r1.guess == 1);
  CHECK(r1.trajectory == std::vector<int>{0});
  const ReaderProblem lean0{6, 0.7, 0.5, 0.3};
  CHECK(simulate_reader(lean0, solve_reader_dp(lean0), {1, 1, 1, 1, 1, 1}).guess == 0);

  const auto p = ex::reader_golden_problem();
  const auto t = solve_reader_dp(p);
  const std::vector<int> ones(20, 1);
  std::size_t first = 0;
  while (!t.stop(first, static_cast<int>(first))) ++first;
  const auto run = simulate_reader(p, t, ones);
  CHECK(run.reads == first);
  CHECK(run.guess == 1);
  CHECK(run.trajectory.back() == static_cast<int>(first));
  const auto again = simulate_reader(p, t, ones);
  CHECK(again.trajectory == run.trajectory);

  CHECK_THROWS_AS(simulate_reader(p, t, std::vector<int>(19, 1)), ModelError);
}

TEST_CASE("first impression witness") {
  const auto r = first_impression_reader(ex::reader_first_impression_problem(), ex::reader_first_impression_sequence());
  CHECK(r.differs);
  CHECK(r.forward.guess == 1);
  CHECK(r.forward.reads == 2);
  CHECK(r.reversed.guess == 0);
  CHECK(r.reversed.reads == 2);
  CHECK(r.full_info_guess == 0);
}

TEST_CASE("palindromes and costless reading are order free") {
  std::mt19937_64 rng(10);
  const ReaderProblem p{11, 0.8, 0.02, 0.5};
  for (int r = 0; r < 200; ++r) {
    auto half = random_bits(rng, 5);
    std::vector<int> pal = half;
    pal.push_back(static_cast<int>(rng() & 1));
    pal.insert(pal.end(), half.rbegin(), half.rend());
    CHECK_FALSE(first_impression_reader(p, pal).differs);
  }

  const ReaderProblem free_odd{15, 0.75, 0.0, 0.5};
  for (int r = 0; r < 2000; ++r) CHECK_FALSE(first_impression_reader(free_odd, random_bits(rng, 15)).differs);
}

TEST_CASE("costless reading with an even horizon can still depend on order") {
  // ties stop: after a lone 0 the reader stops at d = -1 (one more bit cannot
  // flip a strict guess), while reading 1 first reaches d = 0 and guesses 1
  const ReaderProblem p{2, 0.75, 0.0, 0.5};
  const auto r = first_impression_reader(p, {0, 1});
  CHECK(r.forward.guess == 0);
  CHECK(r.reversed.guess == 1);
  CHECK(r.differs);
}

TEST_CASE("polarization witness and controls") {
  const auto a = ex::reader_polarization_problem(ex::kPolarizationPriorA);
  const auto b = ex::reader_polarization_problem(ex::kPolarizationPriorB);
  const auto seq = ex::reader_polarization_sequence();
  const auto r = polarization_reader(a, b, seq);
  CHECK(r.diverged);
  CHECK(r.a.guess == 0);
  CHECK(r.a.reads == 6);
  CHECK(r.b.guess == 1);
  CHECK(r.b.reads == 2);

  std::mt19937_64 rng(12);
  for (int k = 0; k < 500; ++k) {
    const auto bits = random_bits(rng, 10);
    CHECK_FALSE(polarization_reader(a, a, bits).diverged);
    CHECK_FALSE(polarization_reader(b, b, bits).diverged);
  }

  ReaderProblem other = b;
  other.rho = 0.7;
  CHECK_THROWS_AS(polarization_reader(a, other, seq), ModelError);
  other = b;
  other.n = 11;
  CHECK_THROWS_AS(polarization_reader(a, other, seq), ModelError);
}

TEST_CASE("costless polarization follows the full posteriors") {
  std::mt19937_64 rng(13);
  const ReaderProblem a{15, 0.75, 0.0, 0.45}, b{15, 0.75, 0.0, 0.55};
  for (int k = 0; k < 2000; ++k) {
    const auto bits = random_bits(rng, 15);
    int d = 0;
    for (int x : bits) d += x ? 1 : -1;
    const bool straddle = (posterior(a, d) - 0.5) * (posterior(b, d) - 0.5) < 0;
    CHECK(polarization_reader(a, b, bits).diverged == straddle);
  }
}
