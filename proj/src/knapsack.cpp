#include "voteknap/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>

#include "voteknap/errors.hpp"
#include "voteknap/io.hpp"
#include "voteknap/report.hpp"
#include "voteknap/voting.hpp"

namespace voteknap {

namespace {

VotingProfile scheme_profile(int s, const Scheme& scheme) {
  return std::visit(
      [s](const auto& sch) -> VotingProfile {
        using T = std::decay_t<decltype(sch)>;
        if constexpr (std::is_same_v<T, ClassicalScheme>) {
          return classical_profile(s);
        } else if constexpr (std::is_same_v<T, CdfScheme>) {
          return profile_from_cdf(s, sch.cdf);
        } else {
          return profile_from_pnk(s, sch.d).profile;
        }
      },
      scheme);
}

// Profiles depend only on the ensemble size, so solvers memoize them.
class ProfileCache {
 public:
  ProfileCache(const Scheme& scheme, std::size_t max_size)
      : scheme_(scheme), cache_(max_size + 1) {}

  const VotingProfile& get(int s) {
    auto& slot = cache_[static_cast<std::size_t>(s)];
    if (!slot) slot = scheme_profile(s, scheme_);
    return *slot;
  }

 private:
  const Scheme& scheme_;
  std::vector<std::optional<VotingProfile>> cache_;
};

double accuracy_of(std::span<const double> accs, const Scheme& scheme) {
  return q_multi(accs, scheme_profile(static_cast<int>(accs.size()), scheme));
}

// Ensemble sizes the pnk closed form accepts; other schemes take the generic cap.
int max_copy_count(const Scheme& scheme) {
  if (std::holds_alternative<PnkScheme>(scheme))
    return std::min(kMaxCopyEnsembleSize, kPnkMaxN);
  return kMaxCopyEnsembleSize;
}

// The pnk closed form only covers ensembles up to kPnkMaxN members, so a pool
// larger than that could construct an unevaluable subset.
void check_pool_for_scheme(const ClassifierPool& pool, const Scheme& scheme) {
  if (std::holds_alternative<PnkScheme>(scheme) &&
      pool.members().size() > static_cast<std::size_t>(kPnkMaxN))
    throw invalid_input_error("pnk scheme: pool size " +
                              std::to_string(pool.members().size()) +
                              " exceeds the profile limit of " +
                              std::to_string(kPnkMaxN));
}

std::size_t must_index(const ClassifierPool& pool, std::string_view id) {
  const auto idx = pool.index_of(id);
  if (!idx)
    throw invalid_input_error("unknown classifier id \"" + std::string(id) + "\"");
  return *idx;
}

// Ensembles are index sets: duplicates are only legal inside item_efficiency.
void check_distinct(const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (ids[i] == ids[j])
        throw invalid_input_error("duplicate ensemble member \"" + ids[i] + "\"");
}

struct Item {
  std::size_t pool_index;
  double accuracy;
  double time;
};

// Canonical comparison for reporting: accuracy desc, total time asc, then
// lexicographically smallest sorted id vector.
bool better_candidate(double acc_a, double time_a, const std::vector<std::string>& ids_a,
                      double acc_b, double time_b, const std::vector<std::string>& ids_b) {
  if (acc_a != acc_b) return acc_a > acc_b;
  if (time_a != time_b) return time_a < time_b;
  return ids_a < ids_b;
}

std::vector<std::string> sorted_ids(const ClassifierPool& pool,
                                    const std::vector<std::size_t>& indices) {
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (std::size_t i : indices) ids.push_back(pool.members()[i].id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

bool feasible(const ClassifierPool& pool, const Ensemble& subset, double budget) {
  double total = 0.0;
  for (const auto& id : subset.member_ids)
    total += pool.members()[must_index(pool, id)].time;
  return total <= budget;
}

double evaluate_subset(const ClassifierPool& pool, const Ensemble& subset,
                       const Scheme& scheme) {
  if (subset.member_ids.empty())
    throw invalid_input_error("evaluate_subset: subset must be nonempty");
  check_distinct(subset.member_ids);
  std::vector<double> accs;
  accs.reserve(subset.member_ids.size());
  for (const auto& id : subset.member_ids)
    accs.push_back(pool.members()[must_index(pool, id)].accuracy);
  return accuracy_of(accs, scheme);
}

double item_efficiency(const ClassifierPool& pool, std::string_view item_id,
                       double budget, const Scheme& scheme) {
  const Classifier& item = pool.members()[must_index(pool, item_id)];
  int copies;
  if (item.time <= 0.0) {
    copies = max_copy_count(scheme);
  } else {
    const double fit = std::floor(budget / item.time);
    copies = fit < 1.0 ? 1
                       : static_cast<int>(
                             std::min(fit, static_cast<double>(max_copy_count(scheme))));
  }
  const std::vector<double> accs(static_cast<std::size_t>(copies), item.accuracy);
  return accuracy_of(accs, scheme);
}

SolveReport solve_exhaustive(const SolveRequest& req) {
  const std::size_t n = req.pool.members().size();
  if (n > static_cast<std::size_t>(kMaxExhaustivePoolSize))
    throw size_limit_error("solve_exhaustive: pool size " + std::to_string(n) +
                           " exceeds " + std::to_string(kMaxExhaustivePoolSize));
  if (req.budget < 0.0)
    throw invalid_input_error("solve_exhaustive: budget must be >= 0");

  std::vector<Item> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Classifier& c = req.pool.members()[i];
    items.push_back(Item{i, c.accuracy, c.time});
  }
  std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    if (a.time != b.time) return a.time < b.time;
    return req.pool.members()[a.pool_index].id < req.pool.members()[b.pool_index].id;
  });

  ProfileCache profiles(req.scheme, n);

  struct Best {
    double accuracy = -1.0;
    double time = 0.0;
    std::vector<std::string> ids;
  } best;
  std::uint64_t evaluations = 0;

  // Depth-first over the time-sorted items. `mass` carries the
  // Poisson-binomial success-count distribution of the chosen prefix,
  // extended incrementally on each include.
  std::vector<std::size_t> chosen;
  auto consider = [&](const std::vector<double>& mass, double time_used) {
    if (chosen.empty()) return;
    ++evaluations;
    const int s = static_cast<int>(chosen.size());
    const VotingProfile& profile = profiles.get(s);
    double q = 0.0;
    for (int k = 0; k <= s; ++k)
      q += profile.coefficients()[static_cast<std::size_t>(k)] *
           mass[static_cast<std::size_t>(k)];
    q = std::clamp(q, 0.0, 1.0);
    std::vector<std::string> ids = sorted_ids(req.pool, chosen);
    if (better_candidate(q, time_used, ids, best.accuracy, best.time, best.ids)) {
      best = Best{q, time_used, std::move(ids)};
    }
  };

  auto dfs = [&](auto&& self, std::size_t next, double remaining,
                 const std::vector<double>& mass) -> void {
    // Items are time-sorted, so if the next one does not fit, nothing after
    // it does either: the current subset is a leaf.
    if (next == items.size() || items[next].time > remaining) {
      consider(mass, req.budget - remaining);
      return;
    }
    // exclude items[next]
    self(self, next + 1, remaining, mass);
    // include items[next]
    std::vector<double> extended(mass.size() + 1, 0.0);
    const double p = items[next].accuracy;
    for (std::size_t k = 0; k < mass.size(); ++k) {
      extended[k] += mass[k] * (1.0 - p);
      extended[k + 1] += mass[k] * p;
    }
    chosen.push_back(items[next].pool_index);
    self(self, next + 1, remaining - items[next].time, extended);
    chosen.pop_back();
  };
  dfs(dfs, 0, req.budget, std::vector<double>{1.0});

  SolveReport report;
  report.method = "exhaustive";
  report.evaluations = evaluations;
  if (best.accuracy < 0.0) {
    report.infeasible = true;
    report.accuracy = 0.0;
    return report;
  }
  report.best = Ensemble{best.ids};
  // recompute through the public path as a final consistency pass
  report.accuracy = evaluate_subset(req.pool, report.best, req.scheme);
  report.total_time = best.time;
  return report;
}

SolveReport solve_stochastic(const SolveRequest& req) {
  const std::size_t n = req.pool.members().size();
  if (req.budget < 0.0)
    throw invalid_input_error("solve_stochastic: budget must be >= 0");
  if (req.restarts < 1)
    throw invalid_input_error("solve_stochastic: restarts must be >= 1");
  if (req.weight_exponent < 0.0)
    throw invalid_input_error("solve_stochastic: weight_exponent must be >= 0");
  if (req.workers < 1)
    throw invalid_input_error("solve_stochastic: workers must be >= 1");
  check_pool_for_scheme(req.pool, req.scheme);

  // Efficiencies are scored once, against the full budget.
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eff =
        item_efficiency(req.pool, req.pool.members()[i].id, req.budget, req.scheme);
    weight[i] = std::pow(eff, req.weight_exponent);
  }

  ProfileCache profiles(req.scheme, n);

  struct Best {
    double accuracy = -1.0;
    double time = 0.0;
    std::vector<std::string> ids;
  } best;
  std::uint64_t evaluations = 0;
  std::vector<TracePoint> trace;

  int window_improvements = 0;
  std::vector<bool> window(static_cast<std::size_t>(kImprovementWindow), false);

  std::vector<std::size_t> chosen;
  std::vector<double> accs;
  std::vector<std::size_t> available;
  int performed = 0;
  for (int r = 0; r < req.restarts; ++r) {
    RngStream rng = RngStream::substream(req.seed, static_cast<std::uint64_t>(r));
    chosen.clear();
    accs.clear();
    double remaining = req.budget;
    available.resize(n);
    std::iota(available.begin(), available.end(), std::size_t{0});
    bool improved = false;

    while (true) {
      std::erase_if(available, [&](std::size_t i) {
        return req.pool.members()[i].time > remaining;
      });
      if (available.empty()) break;
      double total_weight = 0.0;
      for (std::size_t i : available) total_weight += weight[i];
      std::size_t pick = available.back();
      if (total_weight > 0.0) {
        const double target = rng.next_unit() * total_weight;
        double acc = 0.0;
        for (std::size_t i : available) {
          acc += weight[i];
          if (acc > target) {
            pick = i;
            break;
          }
        }
      } else {
        // all efficiencies zero: fall back to a uniform feasible choice
        pick = available[static_cast<std::size_t>(
            rng.next_below(static_cast<std::uint64_t>(available.size())))];
      }

      remaining -= req.pool.members()[pick].time;
      chosen.push_back(pick);
      accs.push_back(req.pool.members()[pick].accuracy);
      std::erase(available, pick);

      // every constructed prefix is a candidate, not just the maximal set
      ++evaluations;
      const double q =
          q_multi(accs, profiles.get(static_cast<int>(accs.size())));
      std::vector<std::string> ids = sorted_ids(req.pool, chosen);
      if (better_candidate(q, req.budget - remaining, ids, best.accuracy, best.time,
                           best.ids)) {
        best = Best{q, req.budget - remaining, std::move(ids)};
        improved = true;
      }
    }

    if (improved) trace.push_back(TracePoint{r, best.accuracy});

    const std::size_t slot = static_cast<std::size_t>(r % kImprovementWindow);
    if (performed >= kImprovementWindow && window[slot]) --window_improvements;
    window[slot] = improved;
    if (improved) ++window_improvements;
    ++performed;

    if (const auto* rule = std::get_if<ImprovementProbability>(&req.stop_rule);
        rule != nullptr && performed >= kImprovementWindow) {
      const double rate =
          static_cast<double>(window_improvements) / kImprovementWindow;
      if (rate < rule->epsilon) break;
    }
  }

  SolveReport report;
  report.method = "stochastic";
  report.evaluations = evaluations;
  report.trace = std::move(trace);
  if (best.accuracy < 0.0) {
    report.infeasible = true;
    report.accuracy = 0.0;
    return report;
  }
  report.best = Ensemble{best.ids};
  report.accuracy = evaluate_subset(req.pool, report.best, req.scheme);
  report.total_time = best.time;
  return report;
}

std::string to_string(const Scheme& scheme) {
  return std::visit(
      [](const auto& sch) -> std::string {
        using T = std::decay_t<decltype(sch)>;
        if constexpr (std::is_same_v<T, ClassicalScheme>) {
          return "classical";
        } else if constexpr (std::is_same_v<T, CdfScheme>) {
          return "cdf:" + to_string(sch.cdf);
        } else {
          return "pnk:" + std::to_string(sch.d);
        }
      },
      scheme);
}

std::string to_string(const StopRule& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FixedRestarts>) {
          return "fixed";
        } else {
          return "improvement:" + format_double(r.epsilon);
        }
      },
      rule);
}

}  // namespace voteknap
