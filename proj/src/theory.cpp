#include "voteknap/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "voteknap/errors.hpp"
#include "voteknap/pnk.hpp"
#include "voteknap/voting.hpp"

namespace voteknap {

namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw invalid_input_error("mu must lie in [0,1], got " + std::to_string(mu));
}

}  // namespace

double expected_accuracy(const CdfSpec& cdf, double mu, int n) {
  check_mu(mu);
  if (n < 1) throw invalid_input_error("expected_accuracy: n must be >= 1");

  if (mu == 0.0) return cdf_eval(cdf, 0.0);
  if (mu == 1.0) return cdf_eval(cdf, 1.0);

  // Binomial(n, mu) masses anchored at the mode to keep the iterative ratio
  // updates stable; terms below 1e-18 of the running scale are dropped.
  const int mode = std::min(n, static_cast<int>(std::floor((n + 1) * mu)));
  const double log_mode_mass =
      std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
      mode * std::log(mu) + (n - mode) * std::log1p(-mu);
  const double mode_mass = std::exp(log_mode_mass);

  const double ratio = mu / (1.0 - mu);
  double total = mode_mass * cdf_eval(cdf, static_cast<double>(mode) / n);

  double mass = mode_mass;
  for (int k = mode + 1; k <= n; ++k) {
    mass *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
    if (mass < 1e-18 * mode_mass) break;
    total += mass * cdf_eval(cdf, static_cast<double>(k) / n);
  }
  mass = mode_mass;
  for (int k = mode - 1; k >= 0; --k) {
    mass *= static_cast<double>(k + 1) / (ratio * static_cast<double>(n - k));
    if (mass < 1e-18 * mode_mass) break;
    total += mass * cdf_eval(cdf, static_cast<double>(k) / n);
  }
  return std::clamp(total, 0.0, 1.0);
}

double asymptotic_accuracy(const CdfSpec& cdf, double mu) {
  check_mu(mu);
  return cdf_eval(cdf, mu);
}

double variance_bound(const CdfSpec& cdf, double mu) {
  const double f = asymptotic_accuracy(cdf, mu);
  return f * (1.0 - f);
}

double cdf_mean(const CdfSpec& cdf) {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StepMajorityCdf>) {
          return 0.5;  // all mass at the jump
        } else if constexpr (std::is_same_v<T, ArcsineCdf>) {
          return 0.5;  // Beta(1/2, 1/2)
        } else if constexpr (std::is_same_v<T, BetaCdf>) {
          return c.a / (c.a + c.b);
        } else {
          double mean = 0.0;
          double prev = 0.0;
          for (const auto& [y, f] : c.points) {
            mean += y * (f - prev);
            prev = f;
          }
          return mean;
        }
      },
      cdf.variant());
}

CdfSpec beta_fit_moments(std::span<const double> samples) {
  if (samples.size() < 2)
    throw invalid_input_error("beta_fit_moments: needs at least two samples");
  for (double s : samples)
    if (!(s >= 0.0 && s <= 1.0))
      throw invalid_input_error("beta_fit_moments: samples must lie in [0,1]");

  const double n = static_cast<double>(samples.size());
  const double m = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - m) * (s - m);
  const double v = ss / (n - 1.0);

  if (v == 0.0)
    throw degenerate_sample_error("beta_fit_moments: zero sample variance");
  if (v >= m * (1.0 - m))
    throw infeasible_moments_error(
        "beta_fit_moments: sample variance " + std::to_string(v) +
        " is not below m(1-m) = " + std::to_string(m * (1.0 - m)));

  const double common = m * (1.0 - m) / v - 1.0;
  return CdfSpec::beta(m * common, (1.0 - m) * common);
}

SampleStats sample_ensemble_accuracy(const CdfSpec& p_dist, int n,
                                     const CdfSpec& profile_cdf,
                                     std::uint64_t draws, std::uint64_t seed,
                                     int workers) {
  if (n < 1) throw invalid_input_error("sample_ensemble_accuracy: n must be >= 1");
  if (draws < 2)
    throw invalid_input_error("sample_ensemble_accuracy: needs at least two draws");
  if (workers < 1)
    throw invalid_input_error("sample_ensemble_accuracy: workers must be >= 1");

  const VotingProfile profile = profile_from_cdf(n, profile_cdf);

  // Welford accumulation plus an online fourth central moment, so the
  // standard error of the sample variance can be reported:
  //   SE(s^2) = sqrt((m4 - (D-3)/(D-1) * s^4) / D).
  double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  std::uint64_t count = 0;

  std::vector<double> accs(static_cast<std::size_t>(n));
  const std::uint64_t base = draws / static_cast<std::uint64_t>(workers);
  const std::uint64_t extra = draws % static_cast<std::uint64_t>(workers);
  for (int w = 0; w < workers; ++w) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(w));
    const std::uint64_t chunk = base + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
    for (std::uint64_t t = 0; t < chunk; ++t) {
      for (int i = 0; i < n; ++i)
        accs[static_cast<std::size_t>(i)] = sample_from_cdf(p_dist, rng);
      const double q = q_multi(accs, profile);

      ++count;
      const double cnt = static_cast<double>(count);
      const double delta = q - mean;
      const double delta_n = delta / cnt;
      const double delta_n2 = delta_n * delta_n;
      const double term1 = delta * delta_n * (cnt - 1.0);
      mean += delta_n;
      m4 += term1 * delta_n2 * (cnt * cnt - 3.0 * cnt + 3.0) +
            6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
      m3 += term1 * delta_n * (cnt - 2.0) - 3.0 * delta_n * m2;
      m2 += term1;
    }
  }

  const double d = static_cast<double>(count);
  const double variance = m2 / (d - 1.0);
  const double central4 = m4 / d;
  const double mean_se = std::sqrt(std::max(0.0, variance) / d);
  const double var_se = std::sqrt(
      std::max(0.0, (central4 - (d - 3.0) / (d - 1.0) * variance * variance) / d));
  return SampleStats{mean, variance, count, mean_se, var_se};
}

}  // namespace voteknap
