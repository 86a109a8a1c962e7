#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "voteknap/cdf.hpp"
#include "voteknap/voting.hpp"

namespace voteknap {

// How a vote that is not one of the k known-correct votes lands on a class.
// The closed multinomial formula does not pin the generative mechanism down,
// so both candidates are first-class and the comparison harness tabulates
// each against the formula.
enum class GenerativeModel {
  ResidualOverAllClasses,    // uniform over all d classes (may hit the true class)
  ResidualOverWrongClasses,  // uniform over the d-1 wrong classes
};

struct PnkRequest {
  int n = 1;  // ensemble size, 1..30
  int d = 2;  // class count, 2..8
  int k = 0;  // number of correct votes, 0..n
};

// Exact tie-break coefficient plus its double rounding.
struct PnkValue {
  mpq_class exact;
  double value = 0.0;
};

inline constexpr int kPnkMaxN = 30;
inline constexpr int kPnkMaxD = 8;
inline constexpr std::uint64_t kPnkDefaultCompositionCap = 10'000'000;

// Closed-form tie-break coefficient
//   p_{n,k}(d) = d^-(n-k) * sum over {0 <= x <= k, sum x = n-k} of b(x)/alpha(x)
// where b is the multinomial coefficient of the residual-vote split x over d
// classes and alpha(x) = #{i : x_i = k} + 1. Evaluated with exact rational
// arithmetic; the double is the final rounding of the reduced rational.
PnkValue pnk_closed_form(const PnkRequest& req,
                         std::uint64_t composition_cap = kPnkDefaultCompositionCap);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Simulates: the true class starts with k votes, the n-k residual votes land
// per `model`, plurality decides with uniform tie-break over the argmax set.
// Deterministic for fixed (seed, trials, workers): trials are partitioned
// into `workers` contiguous chunks, each on its own substream.
MonteCarloEstimate pnk_monte_carlo(const PnkRequest& req, GenerativeModel model,
                                   std::uint64_t trials, std::uint64_t seed,
                                   int workers = 1);

// The classical 0/1 step profile: p_{n,k} = 1 iff k > floor(n/2).
VotingProfile classical_profile(int n);

// Profile with p_{n,k} = F(k/n).
VotingProfile profile_from_cdf(int n, const CdfSpec& cdf);

struct PnkProfileResult {
  VotingProfile profile;
  // False when the closed-form sequence is not nondecreasing in k. Surfaced
  // as a warning rather than an error.
  bool monotone = true;
};

// Assembles pnk_closed_form for k = 0..n into a profile.
PnkProfileResult profile_from_pnk(int n, int d);

}  // namespace voteknap
