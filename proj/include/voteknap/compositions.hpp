#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voteknap/errors.hpp"

namespace voteknap {

// An ordered vector of nonnegative integers with a fixed sum: the split of
// residual votes across classes.
struct Composition {
  std::vector<int> parts;
};

// Visits every length-`parts` vector of nonnegative integers summing to
// `total` with every coordinate <= cap_per_part, exactly once, in
// lexicographically decreasing order. Streaming: no intermediate storage.
template <typename Visitor>
void for_each_composition(int total, int parts, int cap_per_part, Visitor&& visit) {
  if (total < 0) throw invalid_input_error("for_each_composition: total must be nonnegative");
  if (parts < 1) throw invalid_input_error("for_each_composition: parts must be >= 1");
  if (cap_per_part < 0) throw invalid_input_error("for_each_composition: cap must be nonnegative");

  std::vector<int> x(static_cast<std::size_t>(parts), 0);
  // rec(i, r): assign x[i..] summing to r.
  auto rec = [&](auto&& self, int i, int r) -> void {
    if (i == parts - 1) {
      if (r <= cap_per_part) {
        x[static_cast<std::size_t>(i)] = r;
        visit(std::span<const int>(x));
      }
      return;
    }
    const int remaining_slots = parts - 1 - i;
    const int hi = r < cap_per_part ? r : cap_per_part;
    // lower bound keeps the suffix feasible under the cap
    const std::int64_t lo64 = static_cast<std::int64_t>(r) -
                              static_cast<std::int64_t>(cap_per_part) * remaining_slots;
    const int lo = lo64 > 0 ? static_cast<int>(lo64) : 0;
    for (int v = hi; v >= lo; --v) {
      x[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, r - v);
    }
  };
  rec(rec, 0, total);
}

// Materialized convenience form of for_each_composition.
std::vector<Composition> enumerate_compositions(int total, int parts, int cap_per_part);

// Number of such vectors, by a small counting recurrence (no enumeration).
std::uint64_t count_compositions(int total, int parts, int cap_per_part);

}  // namespace voteknap
