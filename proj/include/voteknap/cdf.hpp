#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "voteknap/rng.hpp"

namespace voteknap {

// Step at 1/2 with F(1/2) = 0, mirroring the strict-majority convention
// k > floor(n/2).
struct StepMajorityCdf {};

// F(y) = (2/pi) * arcsin(sqrt(y)); same law as Beta(1/2, 1/2).
struct ArcsineCdf {};

struct BetaCdf {
  double a = 1.0;
  double b = 1.0;
};

// Right-continuous step function through sorted (y, F(y)) points; F is 0
// before the first point and must reach exactly 1 at the last.
struct EmpiricalStepCdf {
  std::vector<std::pair<double, double>> points;
};

// A cumulative distribution function on [0,1]. Used both as the profile
// source F (p_{n,k} = F(k/n)) and as the sampling law of member accuracies.
class CdfSpec {
 public:
  static CdfSpec step_majority();
  static CdfSpec arcsine();
  static CdfSpec beta(double a, double b);
  static CdfSpec empirical_step(std::vector<std::pair<double, double>> points);
  // Point mass at mu: a single-step empirical CDF jumping 0 -> 1 at mu.
  static CdfSpec point_mass(double mu);

  using Variant = std::variant<StepMajorityCdf, ArcsineCdf, BetaCdf, EmpiricalStepCdf>;
  const Variant& variant() const { return variant_; }

 private:
  explicit CdfSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

// F(y) for y in [0,1].
double cdf_eval(const CdfSpec& cdf, double y);

// One draw from the distribution whose CDF is `cdf`.
double sample_from_cdf(const CdfSpec& cdf, RngStream& rng);

// Regularized incomplete beta I_x(a,b), continued-fraction expansion with
// symmetry reduction; absolute tolerance 1e-12, at most 500 iterations.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace voteknap
