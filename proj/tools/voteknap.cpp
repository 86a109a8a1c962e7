// voteknap: exact and stochastic ensemble-selection toolkit.
//
// Exit codes: 0 success; 2 configuration/validation error; 3 infeasible
// problem (empty feasible set); 4 internal size limit exceeded.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "voteknap/errors.hpp"
#include "voteknap/io.hpp"
#include "voteknap/knapsack.hpp"
#include "voteknap/pnk.hpp"
#include "voteknap/report.hpp"
#include "voteknap/simulate.hpp"
#include "voteknap/theory.hpp"

namespace {

using namespace voteknap;

constexpr const char* kSchemaVersion = "1";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open \"" + path + "\" for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("failed reading \"" + path + "\"");
  return buf.str();
}

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> ids;
  std::string current;
  for (char ch : csv) {
    if (ch == ',') {
      if (!current.empty()) ids.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) ids.push_back(std::move(current));
  if (ids.empty()) throw invalid_input_error("--subset: needs at least one id");
  return ids;
}

StopRule parse_stop_rule(const std::string& text) {
  if (text == "fixed") return FixedRestarts{};
  if (text.rfind("improve:", 0) == 0) {
    const std::string eps_text = text.substr(8);
    try {
      const double eps = std::stod(eps_text);
      if (!(eps >= 0.0 && eps <= 1.0))
        throw invalid_input_error("--stop improve:<eps>: eps must lie in [0,1]");
      return ImprovementProbability{eps};
    } catch (const std::invalid_argument&) {
      throw invalid_input_error("--stop improve:<eps>: not a number: \"" +
                                eps_text + "\"");
    }
  }
  throw invalid_input_error("--stop: expected fixed | improve:<eps>, got \"" +
                            text + "\"");
}

GenerativeModel parse_model(const std::string& text) {
  if (text == "wrong") return GenerativeModel::ResidualOverWrongClasses;
  if (text == "all") return GenerativeModel::ResidualOverAllClasses;
  throw invalid_input_error("--model: expected wrong | all, got \"" + text + "\"");
}

JsonValue metadata_to_json(const ExperimentMetadata& meta) {
  JsonValue obj = JsonValue::object();
  obj.set("seed", JsonValue::uinteger(meta.seed));
  obj.set("version", JsonValue::str(meta.version));
  obj.set("timestamp", JsonValue::integer(meta.timestamp));
  obj.set("workers", JsonValue::integer(meta.workers));
  return obj;
}

JsonValue solve_report_to_json(const SolveReport& report, const SolveRequest& req,
                               bool include_stochastic_params) {
  JsonValue doc = JsonValue::object();
  doc.set("schema_version", JsonValue::str(kSchemaVersion));
  doc.set("command", JsonValue::str("solve"));
  doc.set("method", JsonValue::str(report.method));
  doc.set("scheme", JsonValue::str(to_string(req.scheme)));
  doc.set("budget", JsonValue::num(req.budget));
  JsonValue ids = JsonValue::array();
  for (const auto& id : report.best.member_ids) ids.push(JsonValue::str(id));
  JsonValue best = JsonValue::object();
  best.set("member_ids", std::move(ids));
  doc.set("best", std::move(best));
  doc.set("accuracy", JsonValue::num(report.accuracy));
  doc.set("total_time", JsonValue::num(report.total_time));
  doc.set("evaluations", JsonValue::uinteger(report.evaluations));
  doc.set("infeasible", JsonValue::boolean(report.infeasible));
  if (include_stochastic_params) {
    doc.set("restarts", JsonValue::integer(req.restarts));
    doc.set("seed", JsonValue::uinteger(req.seed));
    doc.set("weight_exponent", JsonValue::num(req.weight_exponent));
    doc.set("stop_rule", JsonValue::str(to_string(req.stop_rule)));
    JsonValue trace = JsonValue::array();
    for (const TracePoint& point : report.trace) {
      JsonValue entry = JsonValue::object();
      entry.set("iteration", JsonValue::integer(point.iteration));
      entry.set("accuracy", JsonValue::num(point.accuracy));
      trace.push(std::move(entry));
    }
    doc.set("trace", std::move(trace));
  }
  return doc;
}

struct CliOptions {
  int workers = 1;
  std::string out = "-";
};

int run_evaluate(const CliOptions& cli, const std::string& pool_path,
                 const std::string& subset_csv, const std::string& scheme_text) {
  const ClassifierPool pool = parse_pool(read_file(pool_path));
  const Scheme scheme = parse_scheme(scheme_text);
  const Ensemble subset{split_ids(subset_csv)};
  const double accuracy = evaluate_subset(pool, subset, scheme);

  double total_time = 0.0;
  for (const auto& id : subset.member_ids)
    total_time += pool.members()[*pool.index_of(id)].time;

  JsonValue doc = JsonValue::object();
  doc.set("schema_version", JsonValue::str(kSchemaVersion));
  doc.set("command", JsonValue::str("evaluate"));
  doc.set("scheme", JsonValue::str(to_string(scheme)));
  JsonValue ids = JsonValue::array();
  for (const auto& id : subset.member_ids) ids.push(JsonValue::str(id));
  doc.set("subset", std::move(ids));
  doc.set("accuracy", JsonValue::num(accuracy));
  doc.set("total_time", JsonValue::num(total_time));
  emit_report(doc.dump(), cli.out);
  return 0;
}

int run_solve(const CliOptions& cli, const std::string& pool_path, double budget,
              const std::string& scheme_text, const std::string& method,
              int restarts, bool seed_given, std::uint64_t seed,
              double weight_exponent, const std::string& stop_text) {
  SolveRequest req;
  req.pool = parse_pool(read_file(pool_path));
  req.budget = budget;
  req.scheme = parse_scheme(scheme_text);
  req.restarts = restarts;
  req.weight_exponent = weight_exponent;
  req.stop_rule = parse_stop_rule(stop_text);
  req.workers = cli.workers;

  SolveReport report;
  bool stochastic = false;
  if (method == "exhaustive") {
    report = solve_exhaustive(req);
  } else if (method == "stochastic") {
    if (!seed_given)
      throw invalid_input_error("solve --method stochastic requires --seed");
    req.seed = seed;
    stochastic = true;
    report = solve_stochastic(req);
  } else {
    throw invalid_input_error("--method: expected exhaustive | stochastic, got \"" +
                              method + "\"");
  }

  emit_report(solve_report_to_json(report, req, stochastic).dump(), cli.out);
  return report.infeasible ? 3 : 0;
}

int run_pnk(const CliOptions& cli, int n, int d, const std::string& method,
            const std::string& model_text, std::uint64_t trials, bool seed_given,
            std::uint64_t seed) {
  JsonValue doc = JsonValue::object();
  doc.set("schema_version", JsonValue::str(kSchemaVersion));
  doc.set("command", JsonValue::str("pnk"));
  doc.set("n", JsonValue::integer(n));
  doc.set("d", JsonValue::integer(d));
  doc.set("method", JsonValue::str(method));

  JsonValue rows = JsonValue::array();
  if (method == "formula") {
    const PnkProfileResult result = profile_from_pnk(n, d);
    for (int k = 0; k <= n; ++k) {
      const PnkValue value = pnk_closed_form(PnkRequest{n, d, k});
      JsonValue row = JsonValue::object();
      row.set("k", JsonValue::integer(k));
      row.set("exact", JsonValue::str(value.exact.get_str()));
      row.set("value", JsonValue::num(value.value));
      rows.push(std::move(row));
    }
    doc.set("rows", std::move(rows));
    doc.set("monotone", JsonValue::boolean(result.monotone));
    if (!result.monotone)
      std::cerr << "warning: tie-break coefficients are not monotone in k for n="
                << n << ", d=" << d << "\n";
  } else if (method == "mc") {
    if (!seed_given) throw invalid_input_error("pnk --method mc requires --seed");
    const GenerativeModel model = parse_model(model_text);
    for (int k = 0; k <= n; ++k) {
      const MonteCarloEstimate est = pnk_monte_carlo(
          PnkRequest{n, d, k}, model, trials,
          derive_child_seed(seed, static_cast<std::uint64_t>(k)), cli.workers);
      JsonValue row = JsonValue::object();
      row.set("k", JsonValue::integer(k));
      row.set("estimate", JsonValue::num(est.estimate));
      row.set("std_error", JsonValue::num(est.std_error));
      rows.push(std::move(row));
    }
    doc.set("rows", std::move(rows));
    doc.set("model", JsonValue::str(model_text));
    doc.set("trials", JsonValue::uinteger(trials));
    doc.set("seed", JsonValue::uinteger(seed));
  } else {
    throw invalid_input_error("--method: expected formula | mc, got \"" + method +
                              "\"");
  }
  emit_report(doc.dump(), cli.out);
  return 0;
}

int run_theory(const CliOptions& cli, const std::string& cdf_text, double mu, int n) {
  const CdfSpec cdf = parse_cdf(cdf_text);
  JsonValue doc = JsonValue::object();
  doc.set("schema_version", JsonValue::str(kSchemaVersion));
  doc.set("command", JsonValue::str("theory"));
  doc.set("cdf", JsonValue::str(to_string(cdf)));
  doc.set("mu", JsonValue::num(mu));
  doc.set("n", JsonValue::integer(n));
  doc.set("expected_accuracy", JsonValue::num(expected_accuracy(cdf, mu, n)));
  doc.set("asymptote", JsonValue::num(asymptotic_accuracy(cdf, mu)));
  doc.set("variance_bound", JsonValue::num(variance_bound(cdf, mu)));
  emit_report(doc.dump(), cli.out);
  return 0;
}

int run_simulate(const CliOptions& cli, const std::string& pool_path, int d,
                 const std::string& model_text, std::uint64_t trials,
                 std::uint64_t seed) {
  const ClassifierPool pool = parse_pool(read_file(pool_path));
  const MonteCarloEstimate est = ensemble_vote_simulate(
      pool, d, parse_model(model_text), trials, seed, cli.workers);
  JsonValue doc = JsonValue::object();
  doc.set("schema_version", JsonValue::str(kSchemaVersion));
  doc.set("command", JsonValue::str("simulate"));
  doc.set("d", JsonValue::integer(d));
  doc.set("model", JsonValue::str(model_text));
  doc.set("trials", JsonValue::uinteger(est.trials));
  doc.set("seed", JsonValue::uinteger(seed));
  doc.set("workers", JsonValue::integer(cli.workers));
  doc.set("estimate", JsonValue::num(est.estimate));
  doc.set("std_error", JsonValue::num(est.std_error));
  emit_report(doc.dump(), cli.out);
  return 0;
}

int run_experiment_cmd(const CliOptions& cli, const std::string& spec_path,
                       const std::string& format_text) {
  const ExperimentSpec spec = parse_experiment_spec(read_file(spec_path));
  const ExperimentResult result = run_experiment(spec, cli.workers);
  const ReportFormat format = parse_format(format_text);

  if (format == ReportFormat::Csv) {
    emit_report(records_to_csv(result.rows, experiment_row_fields(result.kind)),
                cli.out);
    return 0;
  }
  JsonValue doc = JsonValue::object();
  doc.set("schema_version", JsonValue::str(kSchemaVersion));
  doc.set("kind", JsonValue::str(result.kind));
  doc.set("metadata", metadata_to_json(result.metadata));
  JsonValue rows = JsonValue::array();
  for (const Record& row : result.rows) rows.push(record_to_json(row));
  doc.set("rows", std::move(rows));
  doc.set("summary", record_to_json(result.summary));
  emit_report(doc.dump(), cli.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majority-voting ensemble accuracy and time-budgeted selection"};
  app.require_subcommand(1);

  CliOptions cli;
  app.add_option("--workers", cli.workers, "Worker count recorded in reports")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy of a fixed subset");
  std::string ev_pool, ev_subset, ev_scheme = "classical";
  std::string ev_out = "-";
  evaluate->add_option("--pool", ev_pool, "Pool document path")->required();
  evaluate->add_option("--subset", ev_subset, "Comma-separated member ids")->required();
  evaluate->add_option("--scheme", ev_scheme,
                       "classical | cdf:arcsine | cdf:beta:<a>:<b> | cdf:step | pnk:<d>")
      ->capture_default_str();
  evaluate->add_option("--out", ev_out, "Output path or - for stdout")
      ->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Best subset under a time budget");
  std::string so_pool, so_scheme = "classical", so_method = "exhaustive";
  std::string so_stop = "fixed", so_out = "-";
  double so_budget = 0.0, so_weight_exponent = 1.0;
  int so_restarts = 100;
  std::uint64_t so_seed = 0;
  solve->add_option("--pool", so_pool, "Pool document path")->required();
  solve->add_option("--budget", so_budget, "Total time budget T")->required();
  solve->add_option("--scheme", so_scheme, "Profile scheme")->capture_default_str();
  solve->add_option("--method", so_method, "exhaustive | stochastic")
      ->capture_default_str();
  solve->add_option("--restarts", so_restarts, "Stochastic restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* so_seed_opt = solve->add_option("--seed", so_seed, "Stochastic seed (required for stochastic)");
  solve->add_option("--weight-exponent", so_weight_exponent,
                    "Efficiency weight exponent (0 = uniform)")
      ->capture_default_str();
  solve->add_option("--stop", so_stop, "fixed | improve:<eps>")->capture_default_str();
  solve->add_option("--out", so_out, "Output path or - for stdout")
      ->capture_default_str();

  // pnk
  auto* pnk = app.add_subcommand("pnk", "Multiclass tie-break coefficients");
  int pk_n = 1, pk_d = 3;
  std::string pk_method = "formula", pk_model = "wrong", pk_out = "-";
  std::uint64_t pk_trials = 1'000'000, pk_seed = 0;
  pnk->add_option("--n", pk_n, "Ensemble size")->required();
  pnk->add_option("--d", pk_d, "Class count")->required();
  pnk->add_option("--method", pk_method, "formula | mc")->capture_default_str();
  pnk->add_option("--model", pk_model, "wrong | all (mc only)")->capture_default_str();
  pnk->add_option("--trials", pk_trials, "Monte-Carlo trials per k")
      ->capture_default_str();
  auto* pk_seed_opt = pnk->add_option("--seed", pk_seed, "Monte-Carlo seed (required for mc)");
  pnk->add_option("--out", pk_out, "Output path or - for stdout")
      ->capture_default_str();

  // theory
  auto* theory = app.add_subcommand("theory", "Expected accuracy and bounds");
  std::string th_cdf, th_out = "-";
  double th_mu = 0.5;
  int th_n = 1;
  theory->add_option("--cdf", th_cdf, "arcsine | beta:<a>:<b> | step | point:<mu>")
      ->required();
  theory->add_option("--mu", th_mu, "Mean member accuracy")->required();
  theory->add_option("--n", th_n, "Ensemble size")->required();
  theory->add_option("--out", th_out, "Output path or - for stdout")
      ->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "End-to-end multiclass voting");
  std::string si_pool, si_model = "wrong", si_out = "-";
  int si_d = 3;
  std::uint64_t si_trials = 1'000'000, si_seed = 0;
  simulate->add_option("--pool", si_pool, "Pool document path")->required();
  simulate->add_option("--d", si_d, "Class count")->required();
  simulate->add_option("--model", si_model, "wrong | all")->capture_default_str();
  simulate->add_option("--trials", si_trials, "Trials")->capture_default_str();
  simulate->add_option("--seed", si_seed, "Seed")->required();
  simulate->add_option("--out", si_out, "Output path or - for stdout")
      ->capture_default_str();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a sweep from a spec file");
  std::string ex_spec, ex_out = "-", ex_format = "json";
  experiment->add_option("--spec", ex_spec, "Experiment spec document path")->required();
  experiment->add_option("--out", ex_out, "Output path or - for stdout")
      ->capture_default_str();
  experiment->add_option("--format", ex_format, "json | csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (evaluate->parsed()) {
      cli.out = ev_out;
      return run_evaluate(cli, ev_pool, ev_subset, ev_scheme);
    }
    if (solve->parsed()) {
      cli.out = so_out;
      return run_solve(cli, so_pool, so_budget, so_scheme, so_method, so_restarts,
                       so_seed_opt->count() > 0, so_seed, so_weight_exponent, so_stop);
    }
    if (pnk->parsed()) {
      cli.out = pk_out;
      return run_pnk(cli, pk_n, pk_d, pk_method, pk_model, pk_trials,
                     pk_seed_opt->count() > 0, pk_seed);
    }
    if (theory->parsed()) {
      cli.out = th_out;
      return run_theory(cli, th_cdf, th_mu, th_n);
    }
    if (simulate->parsed()) {
      cli.out = si_out;
      return run_simulate(cli, si_pool, si_d, si_model, si_trials, si_seed);
    }
    if (experiment->parsed()) {
      cli.out = ex_out;
      return run_experiment_cmd(cli, ex_spec, ex_format);
    }
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const size_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const invalid_input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
