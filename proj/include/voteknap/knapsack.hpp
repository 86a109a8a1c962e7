#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "voteknap/cdf.hpp"
#include "voteknap/classifier.hpp"
#include "voteknap/pnk.hpp"

namespace voteknap {

// Profile source for an ensemble of size s: the classical step profile,
// F(k/s) for a chosen CDF, or the closed-form multiclass tie-break table.
struct ClassicalScheme {};
struct CdfScheme {
  CdfSpec cdf;
};
struct PnkScheme {
  int d = 3;
};
using Scheme = std::variant<ClassicalScheme, CdfScheme, PnkScheme>;

struct FixedRestarts {};
// Stop early once the fraction of the last 50 restarts that improved the
// incumbent drops below epsilon.
struct ImprovementProbability {
  double epsilon = 0.02;
};
using StopRule = std::variant<FixedRestarts, ImprovementProbability>;

inline constexpr int kImprovementWindow = 50;
inline constexpr int kMaxExhaustivePoolSize = 25;
// Copy-count ceiling for item_efficiency (applies when t_i = 0, and caps
// floor(T/t_i) in general).
inline constexpr int kMaxCopyEnsembleSize = 51;

struct SolveRequest {
  ClassifierPool pool;
  double budget = 0.0;
  Scheme scheme = ClassicalScheme{};
  int restarts = 100;
  std::uint64_t seed = 0;
  double weight_exponent = 1.0;
  StopRule stop_rule = FixedRestarts{};
  int workers = 1;
};

// A subset of pool member ids.
struct Ensemble {
  std::vector<std::string> member_ids;
};

struct TracePoint {
  int iteration = 0;     // restart index at which the incumbent improved
  double accuracy = 0.0; // incumbent accuracy after the improvement
};

struct SolveReport {
  Ensemble best;
  double accuracy = 0.0;
  double total_time = 0.0;
  std::string method;
  std::uint64_t evaluations = 0;
  bool infeasible = false;  // no nonempty subset fits the budget
  std::vector<TracePoint> trace;
};

// True iff the subset's total execution time is within the budget.
bool feasible(const ClassifierPool& pool, const Ensemble& subset, double budget);

// The objective for a fixed subset: builds the size-s profile from the scheme
// and returns q_multi. Feasibility is not checked here.
double evaluate_subset(const ClassifierPool& pool, const Ensemble& subset,
                       const Scheme& scheme);

// Efficiency of one item: the accuracy of a hypothetical ensemble made of
// the maximal number of copies of that item fitting the budget (at least one,
// at most kMaxCopyEnsembleSize). Duplicates are allowed only inside this
// scoring function.
double item_efficiency(const ClassifierPool& pool, std::string_view item_id,
                       double budget, const Scheme& scheme);

// Exact maximization over all feasible subsets, by depth-first subset
// enumeration over items sorted by time, cutting a branch when the smallest
// remaining time already exceeds the residual budget. Ties broken by smaller
// total time, then lexicographically smallest sorted id sequence.
SolveReport solve_exhaustive(const SolveRequest& req);

// Multi-restart stochastic construction: each restart repeatedly picks one of
// the remaining items that still fit the residual budget, with probability
// proportional to efficiency^weight_exponent, until nothing fits. The
// incumbent is updated after every addition, so every constructed prefix is a
// candidate. Deterministic for a fixed request (restart r runs on substream r
// of the seed).
SolveReport solve_stochastic(const SolveRequest& req);

std::string to_string(const Scheme& scheme);
std::string to_string(const StopRule& rule);

}  // namespace voteknap
