#include "voteknap/pnk.hpp"

#include <string>
#include <vector>

#include "voteknap/compositions.hpp"
#include "voteknap/errors.hpp"

namespace voteknap {

namespace {

void check_request(const PnkRequest& req) {
  if (req.n < 1 || req.n > kPnkMaxN)
    throw invalid_input_error("pnk: n must lie in [1," + std::to_string(kPnkMaxN) +
                              "], got " + std::to_string(req.n));
  if (req.d < 2 || req.d > kPnkMaxD)
    throw invalid_input_error("pnk: d must lie in [2," + std::to_string(kPnkMaxD) +
                              "], got " + std::to_string(req.d));
  if (req.k < 0 || req.k > req.n)
    throw invalid_input_error("pnk: k must lie in [0,n], got k=" +
                              std::to_string(req.k));
}

}  // namespace

PnkValue pnk_closed_form(const PnkRequest& req, std::uint64_t composition_cap) {
  check_request(req);
  const int residual = req.n - req.k;

  const std::uint64_t count = count_compositions(residual, req.d, req.k);
  if (count > composition_cap)
    throw size_limit_error("pnk: " + std::to_string(count) +
                           " compositions exceed the cap of " +
                           std::to_string(composition_cap));

  // factorials up to residual, exact
  std::vector<mpz_class> fact(static_cast<std::size_t>(residual) + 1);
  fact[0] = 1;
  for (int i = 1; i <= residual; ++i)
    fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;

  mpq_class sum(0);
  for_each_composition(residual, req.d, req.k, [&](std::span<const int> x) {
    // multinomial coefficient of the split, (n-k)! / prod x_i!
    mpz_class denom(1);
    int ties = 0;
    for (int part : x) {
      denom *= fact[static_cast<std::size_t>(part)];
      if (part == req.k) ++ties;
    }
    mpq_class term(fact[static_cast<std::size_t>(residual)], denom);
    term /= ties + 1;  // alpha_k(x)
    sum += term;
  });

  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(req.d),
                static_cast<unsigned long>(residual));
  mpq_class result = sum / mpq_class(scale);
  result.canonicalize();
  return PnkValue{result, result.get_d()};
}

MonteCarloEstimate pnk_monte_carlo(const PnkRequest& req, GenerativeModel model,
                                   std::uint64_t trials, std::uint64_t seed,
                                   int workers) {
  check_request(req);
  if (trials == 0) throw invalid_input_error("pnk_monte_carlo: trials must be >= 1");
  if (workers < 1) throw invalid_input_error("pnk_monte_carlo: workers must be >= 1");

  const int residual = req.n - req.k;
  const int d = req.d;
  std::uint64_t wins = 0;

  const std::uint64_t base = trials / static_cast<std::uint64_t>(workers);
  const std::uint64_t extra = trials % static_cast<std::uint64_t>(workers);
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  for (int w = 0; w < workers; ++w) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(w));
    const std::uint64_t chunk = base + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
    for (std::uint64_t t = 0; t < chunk; ++t) {
      counts.assign(static_cast<std::size_t>(d), 0);
      counts[0] = req.k;  // class 0 is the true class
      for (int v = 0; v < residual; ++v) {
        const std::uint64_t c =
            model == GenerativeModel::ResidualOverAllClasses
                ? rng.next_below(static_cast<std::uint64_t>(d))
                : 1 + rng.next_below(static_cast<std::uint64_t>(d - 1));
        ++counts[static_cast<std::size_t>(c)];
      }
      int best = counts[0];
      int tied = 1;  // the true class is always a candidate when it attains the max
      bool true_class_max = true;
      for (int c = 1; c < d; ++c) {
        const int v = counts[static_cast<std::size_t>(c)];
        if (v > best) {
          best = v;
          tied = 1;
          true_class_max = false;
        } else if (v == best) {
          ++tied;
        }
      }
      if (counts[0] == best) {
        if (true_class_max && tied == 1) {
          ++wins;
        } else if (rng.next_below(static_cast<std::uint64_t>(tied)) == 0) {
          ++wins;
        }
      }
    }
  }

  const double estimate = static_cast<double>(wins) / static_cast<double>(trials);
  const double se = std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
  return MonteCarloEstimate{estimate, se, trials};
}

VotingProfile classical_profile(int n) {
  if (n < 1) throw invalid_input_error("classical_profile: n must be >= 1");
  std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = n / 2 + 1; k <= n; ++k) coeff[static_cast<std::size_t>(k)] = 1.0;
  return VotingProfile(n, std::move(coeff));
}

VotingProfile profile_from_cdf(int n, const CdfSpec& cdf) {
  if (n < 1) throw invalid_input_error("profile_from_cdf: n must be >= 1");
  std::vector<double> coeff;
  coeff.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
    coeff.push_back(cdf_eval(cdf, static_cast<double>(k) / static_cast<double>(n)));
  return VotingProfile(n, std::move(coeff));
}

PnkProfileResult profile_from_pnk(int n, int d) {
  std::vector<double> coeff;
  coeff.reserve(static_cast<std::size_t>(n) + 1);
  bool monotone = true;
  for (int k = 0; k <= n; ++k) {
    const PnkValue v = pnk_closed_form(PnkRequest{n, d, k});
    if (k > 0 && v.value < coeff.back()) monotone = false;
    coeff.push_back(v.value);
  }
  return PnkProfileResult{VotingProfile(n, std::move(coeff)), monotone};
}

}  // namespace voteknap
