#pragma once

#include <span>
#include <vector>

namespace voteknap {

// The sequence p_{n,0..n}: probability of a correct ensemble decision given
// exactly k of the n members voted correctly. Construction checks length and
// that every coefficient lies in [0,1]. Monotonicity in k is expected for
// profiles derived from a CDF but is not enforced here, because tie-break
// coefficient tables are allowed to surface non-monotone values with a
// warning instead of failing; callers that need it query nondecreasing().
class VotingProfile {
 public:
  VotingProfile(int n, std::vector<double> coefficients);

  int n() const { return n_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double operator[](int k) const { return coefficients_[static_cast<std::size_t>(k)]; }

  bool nondecreasing() const;

 private:
  int n_;
  std::vector<double> coefficients_;
};

// Probability mass of "exactly k of n members correct" for independent,
// non-identical Bernoulli members (Poisson-binomial).
struct CountDistribution {
  int n = 0;
  std::vector<double> mass;  // size n+1
};

// Exact Poisson-binomial mass by the quadratic-time add-one-member recurrence.
CountDistribution success_count_distribution(std::span<const double> accuracies);

// Ensemble accuracy under plain majority voting: the tail sum from ceil(n/2).
// Note for even n this counts an exact half-half split as a correct decision.
double q_binary(std::span<const double> accuracies);

// Generalized majority voting accuracy: sum_k p_{n,k} * P(exactly k correct).
double q_multi(std::span<const double> accuracies, const VotingProfile& profile);

// Same quantity evaluated literally as a sum over all 2^n member subsets.
// Test oracle only; refuses n > 20.
double q_bruteforce_oracle(std::span<const double> accuracies, const VotingProfile& profile);

}  // namespace voteknap
