#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "voteknap/classifier.hpp"
#include "voteknap/knapsack.hpp"
#include "voteknap/pnk.hpp"
#include "voteknap/record.hpp"

namespace voteknap {

inline constexpr const char* kVersion = "voteknap 0.1.0";

// n classifiers with accuracies and times drawn independently and uniformly
// from the given ranges; fully determined by the seed.
ClassifierPool pool_generate(int n, std::pair<double, double> accuracy_range,
                             std::pair<double, double> time_range,
                             std::uint64_t seed);

// End-to-end multiclass voting simulation: each member votes correctly with
// probability p_i, otherwise its vote lands per the generative model;
// plurality decides with uniform tie-break. Returns the fraction of trials
// won by the true class.
MonteCarloEstimate ensemble_vote_simulate(const ClassifierPool& pool, int d,
                                          GenerativeModel model,
                                          std::uint64_t trials,
                                          std::uint64_t seed, int workers = 1);

// --- experiment sweeps ---

struct TheoremCheckSpec {
  // Distribution of member accuracy p, with its grammar string for reporting.
  std::vector<std::pair<std::string, CdfSpec>> p_dists;
  // Profile CDF F, likewise labeled.
  std::vector<std::pair<std::string, CdfSpec>> profile_cdfs;
  std::vector<int> ensemble_sizes;
  std::uint64_t draws = 10'000;
  std::uint64_t seed = 0;
};

struct PnkCompareSpec {
  int n_max = 7;
  std::vector<int> class_counts{3, 4, 5};
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
};

struct SolverBenchmarkSpec {
  int instances = 100;
  int pool_size = 15;
  std::pair<double, double> accuracy_range{0.55, 0.95};
  std::pair<double, double> time_range{1.0, 5.0};
  double budget_fraction = 0.4;  // budget = fraction * total pool time
  int restarts = 500;
  // Selection sharpness for the stochastic runs. Item efficiencies on this
  // instance family are confined to roughly [0.57, 1), so the proportional
  // default of SolveRequest (exponent 1) samples subsets almost uniformly and
  // plateaus near a 50% hit rate. Hit rate against the exhaustive optimum
  // peaks on a broad plateau around exponents 8..16 (~0.97-0.99 at 500
  // restarts) and degrades again once selection turns effectively greedy
  // (>= 32); 12 sits in the middle of that plateau. The value used is
  // reported in every benchmark summary.
  double weight_exponent = 12.0;
  Scheme scheme = ClassicalScheme{};
  std::uint64_t seed = 0;
};

using ExperimentSpec = std::variant<TheoremCheckSpec, PnkCompareSpec, SolverBenchmarkSpec>;

struct ExperimentMetadata {
  std::uint64_t seed = 0;
  std::string version = kVersion;
  // Reproducibility contract: reruns with the same spec must be bit-identical,
  // so this is 0 unless SOURCE_DATE_EPOCH is set in the environment.
  std::int64_t timestamp = 0;
  int workers = 1;
};

struct ExperimentResult {
  std::string kind;
  ExperimentMetadata metadata;
  std::vector<Record> rows;
  Record summary;
};

// Sweeps (p-distribution, F, n): compares sampled mean/variance of q_multi
// against the expectation formula, the F(mu) asymptote, and the variance
// bound. One row per grid point with pass/fail at the declared tolerances.
ExperimentResult run_theorem_check(const TheoremCheckSpec& spec, int workers = 1);

// Tabulates the closed formula against Monte-Carlo estimates under both
// generative models. Internal checks (range, terminal value 1) are pass/fail;
// no formula-vs-simulation equality is asserted.
ExperimentResult run_pnk_compare(const PnkCompareSpec& spec, int workers = 1);

// Measures the stochastic solver's hit rate against the exhaustive optimum on
// random pools, plus objective-evaluation counts for both methods.
ExperimentResult run_solver_benchmark(const SolverBenchmarkSpec& spec, int workers = 1);

ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 1);

}  // namespace voteknap
