#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "voteknap/errors.hpp"
#include "voteknap/io.hpp"
#include "voteknap/simulate.hpp"
#include "voteknap/theory.hpp"

using namespace voteknap;

namespace {

const double* find_double(const Record& row, std::string_view name) {
  const CellValue* cell = row.find(name);
  REQUIRE(cell != nullptr);
  return &std::get<double>(*cell);
}

bool find_bool(const Record& row, std::string_view name) {
  const CellValue* cell = row.find(name);
  REQUIRE(cell != nullptr);
  return std::get<bool>(*cell);
}

std::vector<std::string> field_names(const Record& row) {
  std::vector<std::string> names;
  for (const auto& [k, v] : row.fields) names.push_back(k);
  return names;
}

}  // namespace

TEST_CASE("pool_generate shape, naming, ranges") {
  const ClassifierPool pool = pool_generate(5, {0.55, 0.95}, {1.0, 5.0}, 41);
  REQUIRE(pool.size() == 5);
  CHECK(pool.at(0).id == "c001");
  CHECK(pool.at(4).id == "c005");
  for (const auto& m : pool.members()) {
    CHECK(m.accuracy >= 0.55);
    CHECK(m.accuracy <= 0.95);
    CHECK(m.time >= 1.0);
    CHECK(m.time <= 5.0);
  }
}

TEST_CASE("pool_generate determinism and degenerate ranges") {
  const ClassifierPool a = pool_generate(8, {0.5, 0.9}, {1.0, 2.0}, 7);
  const ClassifierPool b = pool_generate(8, {0.5, 0.9}, {1.0, 2.0}, 7);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.at(i).id == b.at(i).id);
    CHECK(a.at(i).accuracy == b.at(i).accuracy);
    CHECK(a.at(i).time == b.at(i).time);
  }
  const ClassifierPool c = pool_generate(8, {0.5, 0.9}, {1.0, 2.0}, 8);
  bool any_differ = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    any_differ = any_differ || a.at(i).accuracy != c.at(i).accuracy;
  CHECK(any_differ);

  const ClassifierPool fixed = pool_generate(3, {0.7, 0.7}, {2.0, 2.0}, 1);
  for (const auto& m : fixed.members()) {
    CHECK(m.accuracy == 0.7);
    CHECK(m.time == 2.0);
  }
}

TEST_CASE("pool_generate input validation") {
  CHECK_THROWS_AS(pool_generate(0, {0.5, 0.9}, {1.0, 2.0}, 1), invalid_input_error);
  CHECK_THROWS_AS(pool_generate(3, {0.9, 0.5}, {1.0, 2.0}, 1), invalid_input_error);
  CHECK_THROWS_AS(pool_generate(3, {0.5, 1.1}, {1.0, 2.0}, 1), invalid_input_error);
  CHECK_THROWS_AS(pool_generate(3, {0.5, 0.9}, {-1.0, 2.0}, 1), invalid_input_error);
}

TEST_CASE("ensemble_vote_simulate single-member anchors") {
  const ClassifierPool one{{{"m", 0.7, 1.0}}};
  // residual-over-wrong: a wrong vote can never land on the true class
  const MonteCarloEstimate wrong = ensemble_vote_simulate(
      one, 3, GenerativeModel::ResidualOverWrongClasses, 200'000, 99);
  CHECK(std::fabs(wrong.estimate - 0.7) <= 4.0 * wrong.std_error);
  // residual-over-all: a wrong vote still hits the true class 1/d of the time
  const MonteCarloEstimate all = ensemble_vote_simulate(
      one, 3, GenerativeModel::ResidualOverAllClasses, 200'000, 99);
  CHECK(std::fabs(all.estimate - 0.8) <= 4.0 * all.std_error);
  CHECK(wrong.trials == 200'000);
}

TEST_CASE("ensemble_vote_simulate exact and analytic anchors") {
  const ClassifierPool sure{{{"a", 1.0, 1.0}, {"b", 1.0, 1.0}}};
  const MonteCarloEstimate perfect = ensemble_vote_simulate(
      sure, 4, GenerativeModel::ResidualOverWrongClasses, 10'000, 1);
  CHECK(perfect.estimate == 1.0);
  CHECK(perfect.std_error == 0.0);

  // three 0.6 members, two classes: plain odd-n majority, q = 0.648
  const ClassifierPool trio{{{"a", 0.6, 1.0}, {"b", 0.6, 1.0}, {"c", 0.6, 1.0}}};
  const MonteCarloEstimate maj = ensemble_vote_simulate(
      trio, 2, GenerativeModel::ResidualOverWrongClasses, 400'000, 2);
  CHECK(std::fabs(maj.estimate - 0.648) <= 4.0 * maj.std_error);

  // same trio, three classes, wrong-model: q = P(K=1)/6 + P(K>=2) = 0.696
  const MonteCarloEstimate three = ensemble_vote_simulate(
      trio, 3, GenerativeModel::ResidualOverWrongClasses, 400'000, 3);
  CHECK(std::fabs(three.estimate - 0.696) <= 4.0 * three.std_error);

  // two coin flips, two classes: tie on a 1-1 split, q = 0.25 + 0.5/2 = 0.5
  const ClassifierPool coins{{{"a", 0.5, 1.0}, {"b", 0.5, 1.0}}};
  const MonteCarloEstimate tie = ensemble_vote_simulate(
      coins, 2, GenerativeModel::ResidualOverWrongClasses, 400'000, 4);
  CHECK(std::fabs(tie.estimate - 0.5) <= 4.0 * tie.std_error);
}

TEST_CASE("ensemble_vote_simulate determinism and validation") {
  const ClassifierPool trio{{{"a", 0.6, 1.0}, {"b", 0.7, 1.0}, {"c", 0.8, 1.0}}};
  const auto a = ensemble_vote_simulate(trio, 3,
                                        GenerativeModel::ResidualOverAllClasses,
                                        50'000, 12, 1);
  const auto b = ensemble_vote_simulate(trio, 3,
                                        GenerativeModel::ResidualOverAllClasses,
                                        50'000, 12, 1);
  CHECK(a.estimate == b.estimate);
  const auto c = ensemble_vote_simulate(trio, 3,
                                        GenerativeModel::ResidualOverAllClasses,
                                        50'000, 12, 4);
  const auto d = ensemble_vote_simulate(trio, 3,
                                        GenerativeModel::ResidualOverAllClasses,
                                        50'000, 12, 4);
  CHECK(c.estimate == d.estimate);

  CHECK_THROWS_AS(ensemble_vote_simulate(trio, 1,
                                         GenerativeModel::ResidualOverAllClasses,
                                         100, 1),
                  invalid_input_error);
  CHECK_THROWS_AS(ensemble_vote_simulate(trio, 3,
                                         GenerativeModel::ResidualOverAllClasses,
                                         0, 1),
                  invalid_input_error);
  CHECK_THROWS_AS(ensemble_vote_simulate(trio, 3,
                                         GenerativeModel::ResidualOverAllClasses,
                                         100, 1, 0),
                  invalid_input_error);
}

TEST_CASE("run_theorem_check on a deterministic point-mass cell") {
  TheoremCheckSpec spec;
  spec.p_dists = {{"point:0.6", CdfSpec::point_mass(0.6)}};
  spec.profile_cdfs = {{"step", CdfSpec::step_majority()}};
  spec.ensemble_sizes = {3};
  spec.draws = 100;
  spec.seed = 5;
  const ExperimentResult result = run_theorem_check(spec);
  CHECK(result.kind == "theorem_check");
  REQUIRE(result.rows.size() == 1);
  const Record& row = result.rows[0];
  CHECK(field_names(row) == experiment_row_fields("theorem_check"));
  // a point mass makes the sample exact: mean == formula, variance == 0
  CHECK(*find_double(row, "sampled_mean") == doctest::Approx(0.648).epsilon(1e-12));
  CHECK(*find_double(row, "mean_abs_dev") <= 1e-9);
  CHECK(*find_double(row, "sampled_variance") == 0.0);
  CHECK(*find_double(row, "mu") == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(find_bool(row, "mean_pass"));
  CHECK(find_bool(row, "variance_pass"));
  CHECK(find_bool(row, "pass"));
  CHECK(std::get<bool>(*result.summary.find("all_pass")));
  CHECK(std::get<double>(*result.summary.find("pass_rate")) == 1.0);
}

TEST_CASE("run_theorem_check across a small stochastic grid") {
  TheoremCheckSpec spec;
  spec.p_dists = {{"beta:4:2", CdfSpec::beta(4, 2)}};
  spec.profile_cdfs = {{"arcsine", CdfSpec::arcsine()},
                       {"beta:2:2", CdfSpec::beta(2, 2)}};
  spec.ensemble_sizes = {5, 15};
  spec.draws = 4000;
  spec.seed = 77;
  const ExperimentResult result = run_theorem_check(spec);
  REQUIRE(result.rows.size() == 4);
  CHECK(std::get<bool>(*result.summary.find("all_pass")));
  for (const Record& row : result.rows) {
    CHECK(*find_double(row, "mu") == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    CHECK(*find_double(row, "sampled_mean") >= 0.0);
    CHECK(*find_double(row, "sampled_mean") <= 1.0);
  }

  // bit-identical rerun
  const ExperimentResult again = run_theorem_check(spec);
  REQUIRE(again.rows.size() == result.rows.size());
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    CHECK(*find_double(result.rows[i], "sampled_mean") ==
          *find_double(again.rows[i], "sampled_mean"));
    CHECK(*find_double(result.rows[i], "sampled_variance") ==
          *find_double(again.rows[i], "sampled_variance"));
  }
}

TEST_CASE("run_theorem_check empty grid and validation") {
  TheoremCheckSpec spec;
  spec.draws = 100;
  const ExperimentResult result = run_theorem_check(spec);
  CHECK(result.rows.empty());
  CHECK(std::get<double>(*result.summary.find("pass_rate")) == 1.0);
  CHECK(std::get<bool>(*result.summary.find("all_pass")));

  spec.p_dists = {{"arcsine", CdfSpec::arcsine()}};
  spec.profile_cdfs = {{"step", CdfSpec::step_majority()}};
  spec.ensemble_sizes = {3};
  spec.draws = 1;
  CHECK_THROWS_AS(run_theorem_check(spec), invalid_input_error);
  spec.draws = 100;
  spec.ensemble_sizes = {0};
  CHECK_THROWS_AS(run_theorem_check(spec), invalid_input_error);
}

TEST_CASE("run_theorem_check metadata timestamp follows SOURCE_DATE_EPOCH") {
  TheoremCheckSpec spec;
  spec.draws = 100;
  spec.seed = 3;
  CHECK(run_theorem_check(spec).metadata.timestamp == 0);
  ::setenv("SOURCE_DATE_EPOCH", "12345", 1);
  CHECK(run_theorem_check(spec).metadata.timestamp == 12345);
  ::unsetenv("SOURCE_DATE_EPOCH");
  CHECK(run_theorem_check(spec).metadata.timestamp == 0);
  CHECK(run_theorem_check(spec).metadata.seed == 3);
  CHECK(run_theorem_check(spec).metadata.version == kVersion);
}

TEST_CASE("run_pnk_compare tabulates formula against both models") {
  PnkCompareSpec spec;
  spec.n_max = 3;
  spec.class_counts = {3};
  spec.trials = 20'000;
  spec.seed = 5;
  const ExperimentResult result = run_pnk_compare(spec);
  CHECK(result.kind == "pnk_compare");
  REQUIRE(result.rows.size() == 9);  // (n+1) rows for n = 1..3
  CHECK(field_names(result.rows[0]) == experiment_row_fields("pnk_compare"));
  CHECK(std::get<bool>(*result.summary.find("all_internal_pass")));

  // locate the n=3, k=1 row and check its frozen exact value
  const Record* target = nullptr;
  for (const Record& row : result.rows) {
    if (std::get<std::int64_t>(*row.find("n")) == 3 &&
        std::get<std::int64_t>(*row.find("k")) == 1)
      target = &row;
  }
  REQUIRE(target != nullptr);
  CHECK(std::get<std::string>(*target->find("formula_exact")) == "2/9");
  // the wrong-class model lands at 1/6 here, not at the formula's 2/9
  const double wrong = *find_double(*target, "wrong_model_estimate");
  const double wrong_se = *find_double(*target, "wrong_model_std_error");
  CHECK(std::fabs(wrong - 1.0 / 6.0) <= 4.0 * wrong_se);
  // the all-classes model lands at 17/27
  const double all = *find_double(*target, "all_model_estimate");
  const double all_se = *find_double(*target, "all_model_std_error");
  CHECK(std::fabs(all - 17.0 / 27.0) <= 4.0 * all_se);

  const ExperimentResult again = run_pnk_compare(spec);
  for (std::size_t i = 0; i < result.rows.size(); ++i)
    CHECK(*find_double(result.rows[i], "wrong_model_estimate") ==
          *find_double(again.rows[i], "wrong_model_estimate"));
}

TEST_CASE("run_pnk_compare validation") {
  PnkCompareSpec spec;
  spec.n_max = 0;
  CHECK_THROWS_AS(run_pnk_compare(spec), invalid_input_error);
  spec.n_max = 31;
  CHECK_THROWS_AS(run_pnk_compare(spec), invalid_input_error);
  spec.n_max = 3;
  spec.trials = 0;
  CHECK_THROWS_AS(run_pnk_compare(spec), invalid_input_error);
  spec.trials = 100;
  spec.class_counts = {};
  CHECK_THROWS_AS(run_pnk_compare(spec), invalid_input_error);
}

TEST_CASE("run_solver_benchmark dominance and reproducibility") {
  SolverBenchmarkSpec spec;
  spec.instances = 5;
  spec.pool_size = 8;
  spec.restarts = 50;
  spec.budget_fraction = 0.4;
  spec.seed = 9;
  const ExperimentResult result = run_solver_benchmark(spec);
  CHECK(result.kind == "solver_benchmark");
  REQUIRE(result.rows.size() == 5);
  CHECK(field_names(result.rows[0]) == experiment_row_fields("solver_benchmark"));
  CHECK(std::get<bool>(*result.summary.find("dominance_all")));
  CHECK(std::get<double>(*result.summary.find("mean_exhaustive_evaluations")) > 0.0);
  for (const Record& row : result.rows) {
    CHECK(find_bool(row, "dominance_ok"));
    CHECK(*find_double(row, "stochastic_accuracy") <=
          *find_double(row, "exhaustive_accuracy") + 1e-12);
    CHECK(*find_double(row, "gap") >= -1e-12);
  }

  const ExperimentResult again = run_solver_benchmark(spec);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    CHECK(*find_double(result.rows[i], "stochastic_accuracy") ==
          *find_double(again.rows[i], "stochastic_accuracy"));
    CHECK(*find_double(result.rows[i], "exhaustive_accuracy") ==
          *find_double(again.rows[i], "exhaustive_accuracy"));
  }
}

TEST_CASE("run_solver_benchmark validation") {
  SolverBenchmarkSpec spec;
  spec.instances = 0;
  CHECK_THROWS_AS(run_solver_benchmark(spec), invalid_input_error);
  spec.instances = 1;
  spec.pool_size = 26;
  CHECK_THROWS_AS(run_solver_benchmark(spec), invalid_input_error);
  spec.pool_size = 5;
  spec.restarts = 0;
  CHECK_THROWS_AS(run_solver_benchmark(spec), invalid_input_error);
  spec.restarts = 10;
  spec.budget_fraction = -0.1;
  CHECK_THROWS_AS(run_solver_benchmark(spec), invalid_input_error);
}

TEST_CASE("run_experiment dispatches on the spec alternative") {
  PnkCompareSpec pnk;
  pnk.n_max = 1;
  pnk.class_counts = {2};
  pnk.trials = 100;
  const ExperimentResult result = run_experiment(ExperimentSpec{pnk});
  CHECK(result.kind == "pnk_compare");
  CHECK(result.rows.size() == 2);
}
