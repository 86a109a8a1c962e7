#pragma once

#include <string>
#include <string_view>

#include "voteknap/cdf.hpp"
#include "voteknap/classifier.hpp"
#include "voteknap/knapsack.hpp"
#include "voteknap/simulate.hpp"

namespace voteknap {

// Parses a pool document: {"classifiers": [{"id","accuracy","time"}, ...]}.
// Strict: unknown fields are rejected. Diagnostics name the offending entry
// and field.
ClassifierPool parse_pool(std::string_view document);

// Scheme grammar:
//   "classical" | "cdf:arcsine" | "cdf:beta:<a>:<b>" | "cdf:step" | "pnk:<d>"
Scheme parse_scheme(std::string_view text);

// CDF grammar (profile CDFs and member-accuracy distributions):
//   "arcsine" | "beta:<a>:<b>" | "step" | "point:<mu>"
CdfSpec parse_cdf(std::string_view text);

// Parses an experiment spec document: {"kind": ..., "parameters": {...}}.
// Strict: unknown fields are rejected.
ExperimentSpec parse_experiment_spec(std::string_view document);

// Inverse of parse_pool; parse_pool(pool_to_document(p)) reproduces p exactly.
std::string pool_to_document(const ClassifierPool& pool);

// Canonical per-row field names of an experiment kind, used as the CSV header
// when a sweep produced no rows.
std::vector<std::string> experiment_row_fields(const std::string& kind);

std::string to_string(const CdfSpec& cdf);

}  // namespace voteknap
