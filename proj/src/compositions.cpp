#include "voteknap/compositions.hpp"

namespace voteknap {

std::vector<Composition> enumerate_compositions(int total, int parts, int cap_per_part) {
  std::vector<Composition> out;
  for_each_composition(total, parts, cap_per_part, [&](std::span<const int> x) {
    out.push_back(Composition{std::vector<int>(x.begin(), x.end())});
  });
  return out;
}

std::uint64_t count_compositions(int total, int parts, int cap_per_part) {
  if (total < 0) throw invalid_input_error("count_compositions: total must be nonnegative");
  if (parts < 1) throw invalid_input_error("count_compositions: parts must be >= 1");
  if (cap_per_part < 0) throw invalid_input_error("count_compositions: cap must be nonnegative");
  // ways[t] = number of vectors over the parts seen so far summing to t
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
  ways[0] = 1;
  for (int p = 0; p < parts; ++p) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int t = 0; t <= total; ++t) {
      if (ways[static_cast<std::size_t>(t)] == 0) continue;
      const int hi = total - t < cap_per_part ? total - t : cap_per_part;
      for (int v = 0; v <= hi; ++v)
        next[static_cast<std::size_t>(t + v)] += ways[static_cast<std::size_t>(t)];
    }
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(total)];
}

}  // namespace voteknap
