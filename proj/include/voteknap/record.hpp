#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace voteknap {

// One typed cell of an experiment row or report summary.
using CellValue = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

// An ordered field list; order is preserved through serialization so that
// identical inputs produce byte-identical output.
struct Record {
  std::vector<std::pair<std::string, CellValue>> fields;

  void add(std::string name, CellValue value) {
    fields.emplace_back(std::move(name), std::move(value));
  }
  const CellValue* find(std::string_view name) const {
    for (const auto& [k, v] : fields)
      if (k == name) return &v;
    return nullptr;
  }
};

}  // namespace voteknap
