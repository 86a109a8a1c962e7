#include "voteknap/voting.hpp"

#include <bit>
#include <cstdint>
#include <string>

#include "voteknap/errors.hpp"

namespace voteknap {

namespace {

void check_accuracies(std::span<const double> accuracies) {
  if (accuracies.empty())
    throw invalid_input_error("accuracy sequence must be nonempty");
  for (double p : accuracies)
    if (!(p >= 0.0 && p <= 1.0))
      throw invalid_input_error("accuracy " + std::to_string(p) + " outside [0,1]");
}

}  // namespace

VotingProfile::VotingProfile(int n, std::vector<double> coefficients)
    : n_(n), coefficients_(std::move(coefficients)) {
  if (n_ < 1) throw invalid_input_error("profile size n must be >= 1");
  if (coefficients_.size() != static_cast<std::size_t>(n_) + 1)
    throw invalid_input_error("profile for n=" + std::to_string(n_) + " needs " +
                              std::to_string(n_ + 1) + " coefficients, got " +
                              std::to_string(coefficients_.size()));
  for (double c : coefficients_)
    if (!(c >= 0.0 && c <= 1.0))
      throw invalid_input_error("profile coefficient " + std::to_string(c) +
                                " outside [0,1]");
}

bool VotingProfile::nondecreasing() const {
  for (std::size_t k = 1; k < coefficients_.size(); ++k)
    if (coefficients_[k] < coefficients_[k - 1]) return false;
  return true;
}

CountDistribution success_count_distribution(std::span<const double> accuracies) {
  check_accuracies(accuracies);
  const int n = static_cast<int>(accuracies.size());
  std::vector<double> mass(static_cast<std::size_t>(n) + 1, 0.0);
  mass[0] = 1.0;
  // add one member at a time
  int used = 0;
  for (double p : accuracies) {
    for (int k = used; k >= 0; --k) {
      const double m = mass[static_cast<std::size_t>(k)];
      mass[static_cast<std::size_t>(k) + 1] += m * p;
      mass[static_cast<std::size_t>(k)] = m * (1.0 - p);
    }
    ++used;
  }
  return CountDistribution{n, std::move(mass)};
}

double q_binary(std::span<const double> accuracies) {
  const CountDistribution dist = success_count_distribution(accuracies);
  const int n = dist.n;
  const int half_up = (n + 1) / 2;  // ceil(n/2)
  double q = 0.0;
  for (int k = half_up; k <= n; ++k) q += dist.mass[static_cast<std::size_t>(k)];
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

double q_multi(std::span<const double> accuracies, const VotingProfile& profile) {
  if (profile.n() != static_cast<int>(accuracies.size()))
    throw invalid_input_error("profile size " + std::to_string(profile.n()) +
                              " does not match pool size " +
                              std::to_string(accuracies.size()));
  const CountDistribution dist = success_count_distribution(accuracies);
  double q = 0.0;
  for (int k = 0; k <= dist.n; ++k)
    q += profile[k] * dist.mass[static_cast<std::size_t>(k)];
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

double q_bruteforce_oracle(std::span<const double> accuracies,
                           const VotingProfile& profile) {
  check_accuracies(accuracies);
  const int n = static_cast<int>(accuracies.size());
  if (n > 20)
    throw size_limit_error("brute-force oracle limited to n <= 20, got n=" +
                           std::to_string(n));
  if (profile.n() != n)
    throw invalid_input_error("profile size does not match pool size");
  double q = 0.0;
  const std::uint32_t subsets = 1u << n;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i)
      prob *= (mask >> i) & 1u ? accuracies[static_cast<std::size_t>(i)]
                               : 1.0 - accuracies[static_cast<std::size_t>(i)];
    q += profile[std::popcount(mask)] * prob;
  }
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

}  // namespace voteknap
