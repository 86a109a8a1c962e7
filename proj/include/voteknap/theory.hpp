#pragma once

#include <cstdint>
#include <span>

#include "voteknap/cdf.hpp"

namespace voteknap {

// First two moments of the member-accuracy distribution.
struct MomentSummary {
  double mu = 0.0;      // mean, in [0,1]
  double sigma2 = 0.0;  // variance, in [0, mu*(1-mu)]
};

// Expected ensemble accuracy for iid member accuracies with mean mu and
// profile p_{n,k} = F(k/n):
//   E(q) = sum_k F(k/n) C(n,k) mu^k (1-mu)^(n-k).
// Binomial masses by mode-anchored iterative ratio updates; mu in {0,1} are
// point masses (0^0 = 1).
double expected_accuracy(const CdfSpec& cdf, double mu, int n);

// The large-n limit of expected_accuracy: F(mu).
double asymptotic_accuracy(const CdfSpec& cdf, double mu);

// Mean of the distribution whose CDF is `cdf` (the mu that expected_accuracy
// and variance_bound take when the cdf plays the member-accuracy role).
double cdf_mean(const CdfSpec& cdf);

// Upper bound on Var(q) at large n: F(mu) * (1 - F(mu)), at most 1/4.
double variance_bound(const CdfSpec& cdf, double mu);

// Method-of-moments Beta fit to samples in [0,1]:
//   a = m*(m(1-m)/v - 1),  b = (1-m)*(m(1-m)/v - 1)
// with m the sample mean and v the unbiased sample variance.
CdfSpec beta_fit_moments(std::span<const double> samples);

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::uint64_t draws = 0;
  double mean_std_error = 0.0;
  double variance_std_error = 0.0;
};

// Monte-Carlo verification harness: draw p_1..p_n iid from `p_dist`, compute
// q_multi under the profile F(k/n), repeat `draws` times. Deterministic for
// fixed (seed, workers); moments are accumulated with Welford updates so a
// point-mass p yields a variance of exactly zero.
SampleStats sample_ensemble_accuracy(const CdfSpec& p_dist, int n,
                                     const CdfSpec& profile_cdf,
                                     std::uint64_t draws, std::uint64_t seed,
                                     int workers = 1);

}  // namespace voteknap
