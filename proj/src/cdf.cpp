#include "voteknap/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "voteknap/errors.hpp"

namespace voteknap {

CdfSpec CdfSpec::step_majority() { return CdfSpec(Variant{StepMajorityCdf{}}); }

CdfSpec CdfSpec::arcsine() { return CdfSpec(Variant{ArcsineCdf{}}); }

CdfSpec CdfSpec::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw invalid_input_error("beta cdf: shape parameters must be finite and > 0");
  return CdfSpec(Variant{BetaCdf{a, b}});
}

CdfSpec CdfSpec::empirical_step(std::vector<std::pair<double, double>> points) {
  if (points.empty())
    throw invalid_input_error("empirical cdf: needs at least one step point");
  double prev_y = -1.0;
  double prev_f = 0.0;
  for (const auto& [y, f] : points) {
    if (!(y >= 0.0 && y <= 1.0))
      throw invalid_input_error("empirical cdf: step locations must lie in [0,1]");
    if (y <= prev_y)
      throw invalid_input_error("empirical cdf: step locations must be strictly increasing");
    if (!(f >= 0.0 && f <= 1.0))
      throw invalid_input_error("empirical cdf: F values must lie in [0,1]");
    if (f < prev_f)
      throw invalid_input_error("empirical cdf: F values must be nondecreasing");
    prev_y = y;
    prev_f = f;
  }
  if (points.back().second != 1.0)
    throw invalid_input_error("empirical cdf: the last F value must equal 1");
  return CdfSpec(Variant{EmpiricalStepCdf{std::move(points)}});
}

CdfSpec CdfSpec::point_mass(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw invalid_input_error("point mass: mu must lie in [0,1]");
  return empirical_step({{mu, 1.0}});
}

namespace {

// Continued-fraction kernel (Lentz), valid for x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-14;
  constexpr int max_iter = 500;

  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    // even step
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    // odd step
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw invalid_input_error("incomplete beta: shape parameters must be > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw invalid_input_error("incomplete beta: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  double result;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_cf(a, b, x) / a;
  } else {
    result = 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
  }
  return std::clamp(result, 0.0, 1.0);
}

double cdf_eval(const CdfSpec& cdf, double y) {
  if (!(y >= 0.0 && y <= 1.0))
    throw invalid_input_error("cdf_eval: y must lie in [0,1], got " + std::to_string(y));
  return std::visit(
      [y](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StepMajorityCdf>) {
          return y > 0.5 ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, ArcsineCdf>) {
          return (2.0 / std::numbers::pi) * std::asin(std::sqrt(y));
        } else if constexpr (std::is_same_v<T, BetaCdf>) {
          return regularized_incomplete_beta(c.a, c.b, y);
        } else {
          // right-continuous: value of the last step at or before y
          double f = 0.0;
          for (const auto& [loc, val] : c.points) {
            if (loc <= y)
              f = val;
            else
              break;
          }
          return f;
        }
      },
      cdf.variant());
}

double sample_from_cdf(const CdfSpec& cdf, RngStream& rng) {
  return std::visit(
      [&rng](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StepMajorityCdf>) {
          return 0.5;  // all mass at the jump
        } else if constexpr (std::is_same_v<T, ArcsineCdf>) {
          const double u = rng.next_unit();
          const double s = std::sin(std::numbers::pi * u / 2.0);
          return s * s;
        } else if constexpr (std::is_same_v<T, BetaCdf>) {
          return rng.next_beta(c.a, c.b);
        } else {
          // inverse transform: smallest step whose F exceeds u
          const double u = rng.next_unit();
          for (const auto& [loc, val] : c.points)
            if (val > u) return loc;
          return c.points.back().first;
        }
      },
      cdf.variant());
}

}  // namespace voteknap
