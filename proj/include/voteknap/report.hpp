#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "voteknap/record.hpp"

namespace voteknap {

// Shortest 17-significant-digit form: round-trip exact and byte-stable.
std::string format_double(double value);

// Minimal JSON document tree with insertion-ordered objects, so identical
// inputs serialize to byte-identical text. Doubles are emitted with
// format_double.
class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue str(std::string s);
  static JsonValue num(double d);
  static JsonValue integer(std::int64_t i);
  static JsonValue uinteger(std::uint64_t u);
  static JsonValue boolean(bool b);
  static JsonValue from_cell(const CellValue& cell);

  JsonValue& set(const std::string& key, JsonValue v);  // object only
  JsonValue& push(JsonValue v);                         // array only

  std::string dump(int indent = 2) const;

  JsonValue(const JsonValue&);
  JsonValue& operator=(const JsonValue&);
  JsonValue(JsonValue&&) noexcept;
  JsonValue& operator=(JsonValue&&) noexcept;
  ~JsonValue();

 private:
  JsonValue();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

JsonValue record_to_json(const Record& record);

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(const std::string& text);

// Rows-as-records to CSV: header from the first record's field names (all
// records must share the layout), RFC-4180 quoting where needed. With zero
// records the header falls back to `header_if_empty` (header-only output).
std::string records_to_csv(const std::vector<Record>& records,
                           const std::vector<std::string>& header_if_empty = {});

// Writes `content` to a file path, or to stdout when destination is "-".
void emit_report(const std::string& content, const std::string& destination);

}  // namespace voteknap
