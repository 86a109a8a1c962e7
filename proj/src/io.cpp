#include "voteknap/io.hpp"

#include <json.hpp>

#include <charconv>
#include <string>
#include <vector>

#include "voteknap/errors.hpp"
#include "voteknap/report.hpp"

namespace voteknap {

namespace {

using nlohmann::json;

json parse_document(std::string_view document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw parse_error(e.what());  // nlohmann includes the byte position
  }
}

void reject_unknown_fields(const json& obj, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw invalid_input_error(where + ": unknown field \"" + key + "\"");
  }
}

double require_number(const json& obj, const char* field, const std::string& where) {
  if (!obj.contains(field))
    throw invalid_input_error(where + ": missing field \"" + field + "\"");
  const json& v = obj.at(field);
  if (!v.is_number())
    throw invalid_input_error(where + ": field \"" + field + "\" must be a number");
  return v.get<double>();
}

double parse_real(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw invalid_input_error(what + ": not a number: \"" + std::string(text) + "\"");
  return value;
}

long parse_int(std::string_view text, const std::string& what) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw invalid_input_error(what + ": not an integer: \"" + std::string(text) + "\"");
  return value;
}

}  // namespace

ClassifierPool parse_pool(std::string_view document) {
  const json root = parse_document(document);
  if (!root.is_object())
    throw invalid_input_error("pool document: top level must be an object");
  reject_unknown_fields(root, {"classifiers"}, "pool document");
  if (!root.contains("classifiers") || !root.at("classifiers").is_array())
    throw invalid_input_error("pool document: needs a \"classifiers\" list");

  std::vector<Classifier> members;
  std::size_t index = 0;
  for (const json& entry : root.at("classifiers")) {
    const std::string where = "classifiers[" + std::to_string(index) + "]";
    if (!entry.is_object())
      throw invalid_input_error(where + ": must be an object");
    reject_unknown_fields(entry, {"id", "accuracy", "time"}, where);
    if (!entry.contains("id") || !entry.at("id").is_string())
      throw invalid_input_error(where + ": field \"id\" must be a string");
    Classifier c;
    c.id = entry.at("id").get<std::string>();
    c.accuracy = require_number(entry, "accuracy", where);
    c.time = require_number(entry, "time", where);
    members.push_back(std::move(c));
    ++index;
  }
  return ClassifierPool(std::move(members));  // pool invariants enforced here
}

std::string pool_to_document(const ClassifierPool& pool) {
  JsonValue list = JsonValue::array();
  for (const Classifier& c : pool.members()) {
    JsonValue entry = JsonValue::object();
    entry.set("id", JsonValue::str(c.id));
    entry.set("accuracy", JsonValue::num(c.accuracy));
    entry.set("time", JsonValue::num(c.time));
    list.push(std::move(entry));
  }
  JsonValue root = JsonValue::object();
  root.set("classifiers", std::move(list));
  return root.dump();
}

CdfSpec parse_cdf(std::string_view text) {
  if (text == "arcsine") return CdfSpec::arcsine();
  if (text == "step") return CdfSpec::step_majority();
  if (text.starts_with("beta:")) {
    const std::string_view rest = text.substr(5);
    const std::size_t sep = rest.find(':');
    if (sep == std::string_view::npos)
      throw invalid_input_error("cdf \"beta\" needs two parameters: beta:<a>:<b>");
    const double a = parse_real(rest.substr(0, sep), "beta parameter a");
    const double b = parse_real(rest.substr(sep + 1), "beta parameter b");
    return CdfSpec::beta(a, b);
  }
  if (text.starts_with("point:")) {
    const double mu = parse_real(text.substr(6), "point mass mu");
    return CdfSpec::point_mass(mu);
  }
  throw invalid_input_error(
      "unknown cdf \"" + std::string(text) +
      "\" (expected arcsine | beta:<a>:<b> | step | point:<mu>)");
}

Scheme parse_scheme(std::string_view text) {
  if (text == "classical") return ClassicalScheme{};
  if (text.starts_with("cdf:")) return CdfScheme{parse_cdf(text.substr(4))};
  if (text.starts_with("pnk:")) {
    const long d = parse_int(text.substr(4), "pnk class count");
    if (d < 2 || d > kPnkMaxD)
      throw invalid_input_error("pnk class count must lie in [2," +
                                std::to_string(kPnkMaxD) + "]");
    return PnkScheme{static_cast<int>(d)};
  }
  throw invalid_input_error(
      "unknown scheme \"" + std::string(text) +
      "\" (expected classical | cdf:arcsine | cdf:beta:<a>:<b> | cdf:step | pnk:<d>)");
}

std::string to_string(const CdfSpec& cdf) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StepMajorityCdf>) {
          return "step";
        } else if constexpr (std::is_same_v<T, ArcsineCdf>) {
          return "arcsine";
        } else if constexpr (std::is_same_v<T, BetaCdf>) {
          return "beta:" + format_double(c.a) + ":" + format_double(c.b);
        } else {
          if (c.points.size() == 1)
            return "point:" + format_double(c.points.front().first);
          return "empirical(" + std::to_string(c.points.size()) + " steps)";
        }
      },
      cdf.variant());
}

namespace {

std::vector<std::pair<std::string, CdfSpec>> parse_cdf_list(const json& value,
                                                            const std::string& where) {
  if (!value.is_array())
    throw invalid_input_error(where + ": must be a list of cdf strings");
  std::vector<std::pair<std::string, CdfSpec>> out;
  for (const json& item : value) {
    if (!item.is_string())
      throw invalid_input_error(where + ": entries must be cdf strings");
    const std::string label = item.get<std::string>();
    out.emplace_back(label, parse_cdf(label));
  }
  return out;
}

std::vector<int> parse_int_list(const json& value, const std::string& where) {
  if (!value.is_array())
    throw invalid_input_error(where + ": must be a list of integers");
  std::vector<int> out;
  for (const json& item : value) {
    if (!item.is_number_integer())
      throw invalid_input_error(where + ": entries must be integers");
    out.push_back(item.get<int>());
  }
  return out;
}

std::pair<double, double> parse_range(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value.at(0).is_number() ||
      !value.at(1).is_number())
    throw invalid_input_error(where + ": must be a two-number list [lo, hi]");
  return {value.at(0).get<double>(), value.at(1).get<double>()};
}

std::uint64_t parse_seed(const json& value, const std::string& where) {
  if (!value.is_number_unsigned() && !value.is_number_integer())
    throw invalid_input_error(where + ": must be an integer");
  if (value.is_number_integer() && !value.is_number_unsigned() &&
      value.get<std::int64_t>() < 0)
    throw invalid_input_error(where + ": must be nonnegative");
  return value.get<std::uint64_t>();
}

TheoremCheckSpec parse_theorem_check(const json& params) {
  reject_unknown_fields(
      params, {"p_dists", "profile_cdfs", "ensemble_sizes", "draws", "seed"},
      "theorem_check parameters");
  TheoremCheckSpec spec;
  if (params.contains("p_dists"))
    spec.p_dists = parse_cdf_list(params.at("p_dists"), "p_dists");
  if (params.contains("profile_cdfs"))
    spec.profile_cdfs = parse_cdf_list(params.at("profile_cdfs"), "profile_cdfs");
  if (params.contains("ensemble_sizes"))
    spec.ensemble_sizes = parse_int_list(params.at("ensemble_sizes"), "ensemble_sizes");
  if (params.contains("draws")) spec.draws = parse_seed(params.at("draws"), "draws");
  if (params.contains("seed")) spec.seed = parse_seed(params.at("seed"), "seed");
  return spec;
}

PnkCompareSpec parse_pnk_compare(const json& params) {
  reject_unknown_fields(params, {"n_max", "class_counts", "trials", "seed"},
                        "pnk_compare parameters");
  PnkCompareSpec spec;
  if (params.contains("n_max")) {
    if (!params.at("n_max").is_number_integer())
      throw invalid_input_error("n_max: must be an integer");
    spec.n_max = params.at("n_max").get<int>();
  }
  if (params.contains("class_counts"))
    spec.class_counts = parse_int_list(params.at("class_counts"), "class_counts");
  if (params.contains("trials")) spec.trials = parse_seed(params.at("trials"), "trials");
  if (params.contains("seed")) spec.seed = parse_seed(params.at("seed"), "seed");
  return spec;
}

SolverBenchmarkSpec parse_solver_benchmark(const json& params) {
  reject_unknown_fields(params,
                        {"instances", "pool_size", "accuracy_range", "time_range",
                         "budget_fraction", "restarts", "weight_exponent", "scheme",
                         "seed"},
                        "solver_benchmark parameters");
  SolverBenchmarkSpec spec;
  if (params.contains("instances")) {
    if (!params.at("instances").is_number_integer())
      throw invalid_input_error("instances: must be an integer");
    spec.instances = params.at("instances").get<int>();
  }
  if (params.contains("pool_size")) {
    if (!params.at("pool_size").is_number_integer())
      throw invalid_input_error("pool_size: must be an integer");
    spec.pool_size = params.at("pool_size").get<int>();
  }
  if (params.contains("accuracy_range"))
    spec.accuracy_range = parse_range(params.at("accuracy_range"), "accuracy_range");
  if (params.contains("time_range"))
    spec.time_range = parse_range(params.at("time_range"), "time_range");
  if (params.contains("budget_fraction")) {
    if (!params.at("budget_fraction").is_number())
      throw invalid_input_error("budget_fraction: must be a number");
    spec.budget_fraction = params.at("budget_fraction").get<double>();
  }
  if (params.contains("restarts")) {
    if (!params.at("restarts").is_number_integer())
      throw invalid_input_error("restarts: must be an integer");
    spec.restarts = params.at("restarts").get<int>();
  }
  if (params.contains("weight_exponent")) {
    if (!params.at("weight_exponent").is_number())
      throw invalid_input_error("weight_exponent: must be a number");
    spec.weight_exponent = params.at("weight_exponent").get<double>();
  }
  if (params.contains("scheme")) {
    if (!params.at("scheme").is_string())
      throw invalid_input_error("scheme: must be a scheme string");
    spec.scheme = parse_scheme(params.at("scheme").get<std::string>());
  }
  if (params.contains("seed")) spec.seed = parse_seed(params.at("seed"), "seed");
  return spec;
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view document) {
  const json root = parse_document(document);
  if (!root.is_object())
    throw invalid_input_error("experiment spec: top level must be an object");
  reject_unknown_fields(root, {"kind", "parameters"}, "experiment spec");
  if (!root.contains("kind") || !root.at("kind").is_string())
    throw invalid_input_error("experiment spec: needs a \"kind\" string");
  const std::string kind = root.at("kind").get<std::string>();
  const json params = root.contains("parameters") ? root.at("parameters")
                                                  : json::object();
  if (!params.is_object())
    throw invalid_input_error("experiment spec: \"parameters\" must be an object");

  if (kind == "theorem_check") return parse_theorem_check(params);
  if (kind == "pnk_compare") return parse_pnk_compare(params);
  if (kind == "solver_benchmark") return parse_solver_benchmark(params);
  throw invalid_input_error(
      "experiment spec: unknown kind \"" + kind +
      "\" (expected theorem_check | pnk_compare | solver_benchmark)");
}

std::vector<std::string> experiment_row_fields(const std::string& kind) {
  if (kind == "theorem_check")
    return {"p_dist", "profile", "n", "mu", "draws", "sampled_mean",
            "mean_std_error", "expected", "mean_abs_dev", "mean_pass", "asymptote",
            "asymptote_abs_dev", "sampled_variance", "variance_std_error",
            "variance_bound", "variance_pass", "pass"};
  if (kind == "pnk_compare")
    return {"d", "n", "k", "formula_exact", "formula", "wrong_model_estimate",
            "wrong_model_std_error", "wrong_model_abs_dev", "all_model_estimate",
            "all_model_std_error", "all_model_abs_dev", "internal_pass"};
  if (kind == "solver_benchmark")
    return {"instance", "pool_seed", "solver_seed", "budget", "exhaustive_accuracy",
            "exhaustive_time", "exhaustive_evaluations", "stochastic_accuracy",
            "stochastic_time", "stochastic_evaluations", "gap", "hit",
            "dominance_ok", "infeasible"};
  throw invalid_input_error("unknown experiment kind \"" + kind + "\"");
}

}  // namespace voteknap
