#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace boundedrat {

// Hidden bit b (1 w.p. prior1); n i.i.d. signals each equal to b w.p. rho;
// reading a signal costs c; a correct guess pays 1.
struct ReaderProblem {
  std::size_t n = 20;
  double rho = 0.75;
  double c = 0.01;
  double prior1 = 0.5;
};

// Throws BadParameter unless 0.5 < rho < 1, c >= 0 and 0 < prior1 < 1.
void validate_reader(const ReaderProblem& problem);

// Log-odds that b = 1 after a count difference d = #ones - #zeros.
double posterior_log_odds(const ReaderProblem& problem, int d);

// P(b = 1 | d).
double posterior(const ReaderProblem& problem, int d);

// Continuation values of the optimal stopping problem over (reads i, count
// difference d), d in [-i, i]. Values exclude costs already paid.
class ReaderDPTable {
 public:
  explicit ReaderDPTable(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  double W(std::size_t i, int d) const { return value_[offset(i, d)]; }
  bool stop(std::size_t i, int d) const { return stop_[offset(i, d)] != 0; }

  void set(std::size_t i, int d, double w, bool stop_here);

 private:
  std::size_t offset(std::size_t i, int d) const;

  std::size_t n_;
  std::vector<double> value_;
  std::vector<std::uint8_t> stop_;
};

// Continuation within this absolute tolerance of the stopping value counts as a tie.
inline constexpr double kReaderTieTolerance = 1e-12;

// Backward induction; ties resolve to stop.
ReaderDPTable solve_reader_dp(const ReaderProblem& problem);

// First i at which stop(i, d) holds for every |d| <= i: after that many reads
// no further signal is ever read.
std::size_t disregard_index(const ReaderDPTable& table);

// Smallest |d| (same parity as i) at which the reader stops after i reads.
int stop_threshold(const ReaderDPTable& table, std::size_t i);

struct ReaderRun {
  int guess = 1;
  std::size_t reads = 0;
  std::vector<int> trajectory;  // d after 0, 1, ..., reads signals
};

// Guess from the sign of the posterior log-odds; ties guess 1.
int guess_for(const ReaderProblem& problem, int d);

// Reads bits until the table says stop or the sequence is exhausted.
// Throws LengthMismatch unless sequence.size() == n.
ReaderRun simulate_reader(const ReaderProblem& problem, const ReaderDPTable& table,
                          const std::vector<int>& sequence);

struct FirstImpressionReaderResult {
  ReaderRun forward;
  ReaderRun reversed;
  bool differs = false;
  int full_info_guess = 1;
};

FirstImpressionReaderResult first_impression_reader(const ReaderProblem& problem,
                                                    const std::vector<int>& sequence);

struct PolarizationReaderResult {
  ReaderRun a;
  ReaderRun b;
  bool diverged = false;
};

// Problems must agree on n, rho and c (MismatchedProblems).
PolarizationReaderResult polarization_reader(const ReaderProblem& problem_a,
                                             const ReaderProblem& problem_b,
                                             const std::vector<int>& sequence);

}  // namespace boundedrat
