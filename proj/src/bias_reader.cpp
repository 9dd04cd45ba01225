#include "boundedrat/bias_reader.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "boundedrat/error.hpp"

namespace boundedrat {

void validate_reader(const ReaderProblem& p) {
  if (!(p.rho > 0.5 && p.rho < 1.0)) throw ModelError(ErrorCode::BadParameter, "rho must lie in (0.5, 1)");
  if (!(p.c >= 0.0) || !std::isfinite(p.c)) throw ModelError(ErrorCode::BadParameter, "c must be >= 0");
  if (!(p.prior1 > 0.0 && p.prior1 < 1.0)) throw ModelError(ErrorCode::BadParameter, "prior1 must lie in (0,1)");
}

double posterior_log_odds(const ReaderProblem& p, int d) {
  return std::log(p.prior1 / (1.0 - p.prior1)) + d * std::log(p.rho / (1.0 - p.rho));
}

double posterior(const ReaderProblem& p, int d) {
  if (d == 0) return p.prior1;
  const double lo = posterior_log_odds(p, d);
  return lo >= 0.0 ? 1.0 / (1.0 + std::exp(-lo)) : std::exp(lo) / (1.0 + std::exp(lo));
}

ReaderDPTable::ReaderDPTable(std::size_t n)
    : n_(n), value_((n + 1) * (2 * n + 1), 0.0), stop_((n + 1) * (2 * n + 1), 0) {}

std::size_t ReaderDPTable::offset(std::size_t i, int d) const {
  if (i > n_ || static_cast<std::size_t>(std::abs(d)) > i) {
    throw ModelError(ErrorCode::IndexOutOfRange, "(i, d) outside the reader table");
  }
  return i * (2 * n_ + 1) + static_cast<std::size_t>(d + static_cast<int>(n_));
}

void ReaderDPTable::set(std::size_t i, int d, double w, bool stop_here) {
  const auto o = offset(i, d);
  value_[o] = w;
  stop_[o] = stop_here ? 1 : 0;
}

ReaderDPTable solve_reader_dp(const ReaderProblem& p) {
  validate_reader(p);
  ReaderDPTable table(p.n);
  const int n = static_cast<int>(p.n);
  for (int i = n; i >= 0; --i) {
    for (int d = -i; d <= i; ++d) {
      const double post = posterior(p, d);
      const double stop_value = std::max(post, 1.0 - post);
      if (i == n) {
        table.set(static_cast<std::size_t>(i), d, stop_value, true);
        continue;
      }
      const double p_one = post * p.rho + (1.0 - post) * (1.0 - p.rho);
      const auto next = static_cast<std::size_t>(i + 1);
      const double cont = -p.c + p_one * table.W(next, d + 1) + (1.0 - p_one) * table.W(next, d - 1);
      const bool stop_here = cont <= stop_value + kReaderTieTolerance;
      table.set(static_cast<std::size_t>(i), d, stop_here ? stop_value : cont, stop_here);
    }
  }
  return table;
}

std::size_t disregard_index(const ReaderDPTable& table) {
  for (std::size_t i = 0; i <= table.n(); ++i) {
    bool all = true;
    for (int d = -static_cast<int>(i); d <= static_cast<int>(i) && all; ++d) all = table.stop(i, d);
    if (all) return i;
  }
  return table.n();
}

int stop_threshold(const ReaderDPTable& table, std::size_t i) {
  const int ii = static_cast<int>(i);
  for (int a = ii % 2; a <= ii; a += 2) {
    if (table.stop(i, a) || table.stop(i, -a)) return a;
  }
  return std::numeric_limits<int>::max();
}

int guess_for(const ReaderProblem& problem, int d) {
  return posterior_log_odds(problem, d) >= 0.0 ? 1 : 0;
}

ReaderRun simulate_reader(const ReaderProblem& problem, const ReaderDPTable& table,
                          const std::vector<int>& sequence) {
  if (sequence.size() != problem.n || table.n() != problem.n) {
    throw ModelError(ErrorCode::LengthMismatch, "sequence length must equal n");
  }
  ReaderRun run;
  int d = 0;
  std::size_t i = 0;
  run.trajectory.push_back(0);
  while (i < problem.n && !table.stop(i, d)) {
    d += sequence[i] != 0 ? 1 : -1;
    ++i;
    run.trajectory.push_back(d);
  }
  run.reads = i;
  run.guess = guess_for(problem, d);
  return run;
}

FirstImpressionReaderResult first_impression_reader(const ReaderProblem& problem,
                                                    const std::vector<int>& sequence) {
  const auto table = solve_reader_dp(problem);
  FirstImpressionReaderResult out;
  out.forward = simulate_reader(problem, table, sequence);
  out.reversed = simulate_reader(problem, table, std::vector<int>(sequence.rbegin(), sequence.rend()));
  out.differs = out.forward.guess != out.reversed.guess;
  int d = 0;
  for (int bit : sequence) d += bit != 0 ? 1 : -1;
  out.full_info_guess = guess_for(problem, d);
  return out;
}

PolarizationReaderResult polarization_reader(const ReaderProblem& problem_a,
                                             const ReaderProblem& problem_b,
                                             const std::vector<int>& sequence) {
  if (problem_a.n != problem_b.n || problem_a.rho != problem_b.rho || problem_a.c != problem_b.c) {
    throw ModelError(ErrorCode::MismatchedProblems, "reader problems may differ only in prior1");
  }
  PolarizationReaderResult out;
  out.a = simulate_reader(problem_a, solve_reader_dp(problem_a), sequence);
  out.b = simulate_reader(problem_b, solve_reader_dp(problem_b), sequence);
  out.diverged = out.a.guess != out.b.guess;
  return out;
}

}  // namespace boundedrat
