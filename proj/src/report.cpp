#include "voteknap/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <utility>
#include <variant>

#include "voteknap/errors.hpp"

namespace voteknap {

std::string format_double(double value) {
  if (std::isnan(value)) return "null";
  if (std::isinf(value)) return value > 0 ? "1e9999" : "-1e9999";
  // %.17g round-trips every finite double; trim to the shortest form that
  // still round-trips so output stays readable and byte-stable.
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

}  // namespace

struct JsonValue::Impl {
  enum class Kind { Object, Array, String, Number, Integer, Uinteger, Boolean };
  Kind kind = Kind::Object;
  std::vector<std::pair<std::string, JsonValue>> members;  // Object
  std::vector<JsonValue> elements;                          // Array
  std::string string_value;
  double number_value = 0.0;
  std::int64_t int_value = 0;
  std::uint64_t uint_value = 0;
  bool bool_value = false;

  void dump_to(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind) {
      case Kind::Object: {
        if (members.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < members.size(); ++i) {
          out += pad;
          append_json_string(out, members[i].first);
          out += ": ";
          members[i].second.impl_->dump_to(out, indent, depth + 1);
          if (i + 1 < members.size()) out += ',';
          out += '\n';
        }
        out += close_pad;
        out += '}';
        return;
      }
      case Kind::Array: {
        if (elements.empty()) {
          out += "[]";
          return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < elements.size(); ++i) {
          out += pad;
          elements[i].impl_->dump_to(out, indent, depth + 1);
          if (i + 1 < elements.size()) out += ',';
          out += '\n';
        }
        out += close_pad;
        out += ']';
        return;
      }
      case Kind::String: append_json_string(out, string_value); return;
      case Kind::Number: out += format_double(number_value); return;
      case Kind::Integer: out += std::to_string(int_value); return;
      case Kind::Uinteger: out += std::to_string(uint_value); return;
      case Kind::Boolean: out += bool_value ? "true" : "false"; return;
    }
  }
};

JsonValue::JsonValue() : impl_(std::make_unique<Impl>()) {}
JsonValue::~JsonValue() = default;
JsonValue::JsonValue(JsonValue&&) noexcept = default;
JsonValue& JsonValue::operator=(JsonValue&&) noexcept = default;
JsonValue::JsonValue(const JsonValue& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
JsonValue& JsonValue::operator=(const JsonValue& other) {
  if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.impl_->kind = Impl::Kind::Object;
  return v;
}
JsonValue JsonValue::array() {
  JsonValue v;
  v.impl_->kind = Impl::Kind::Array;
  return v;
}
JsonValue JsonValue::str(std::string s) {
  JsonValue v;
  v.impl_->kind = Impl::Kind::String;
  v.impl_->string_value = std::move(s);
  return v;
}
JsonValue JsonValue::num(double d) {
  JsonValue v;
  v.impl_->kind = Impl::Kind::Number;
  v.impl_->number_value = d;
  return v;
}
JsonValue JsonValue::integer(std::int64_t i) {
  JsonValue v;
  v.impl_->kind = Impl::Kind::Integer;
  v.impl_->int_value = i;
  return v;
}
JsonValue JsonValue::uinteger(std::uint64_t u) {
  JsonValue v;
  v.impl_->kind = Impl::Kind::Uinteger;
  v.impl_->uint_value = u;
  return v;
}
JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.impl_->kind = Impl::Kind::Boolean;
  v.impl_->bool_value = b;
  return v;
}

JsonValue JsonValue::from_cell(const CellValue& cell) {
  return std::visit(
      [](const auto& value) -> JsonValue {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return JsonValue::str(value);
        } else if constexpr (std::is_same_v<T, double>) {
          return JsonValue::num(value);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return JsonValue::integer(value);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return JsonValue::uinteger(value);
        } else {
          return JsonValue::boolean(value);
        }
      },
      cell);
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  impl_->members.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  impl_->elements.push_back(std::move(v));
  return *this;
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  impl_->dump_to(out, indent, 0);
  out += '\n';
  return out;
}

JsonValue record_to_json(const Record& record) {
  JsonValue obj = JsonValue::object();
  for (const auto& [name, cell] : record.fields)
    obj.set(name, JsonValue::from_cell(cell));
  return obj;
}

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw invalid_input_error("unknown report format \"" + text +
                            "\" (expected json or csv)");
}

namespace {

std::string csv_cell(const CellValue& cell) {
  std::string raw = std::visit(
      [](const auto& value) -> std::string {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return value;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(value);
        } else if constexpr (std::is_same_v<T, bool>) {
          return value ? "true" : "false";
        } else {
          return std::to_string(value);
        }
      },
      cell);
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string records_to_csv(const std::vector<Record>& records,
                           const std::vector<std::string>& header_if_empty) {
  std::string out;
  if (records.empty()) {
    if (header_if_empty.empty()) return "";
    for (std::size_t i = 0; i < header_if_empty.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_cell(CellValue{header_if_empty[i]});
    }
    out += '\n';
    return out;
  }
  const Record& first = records.front();
  for (std::size_t i = 0; i < first.fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_cell(CellValue{first.fields[i].first});
  }
  out += '\n';
  for (const auto& record : records) {
    if (record.fields.size() != first.fields.size())
      throw invalid_input_error("csv: records disagree on the field layout");
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
      if (record.fields[i].first != first.fields[i].first)
        throw invalid_input_error("csv: records disagree on the field layout");
      if (i > 0) out += ',';
      out += csv_cell(record.fields[i].second);
    }
    out += '\n';
  }
  return out;
}

void emit_report(const std::string& content, const std::string& destination) {
  if (destination == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw io_error("cannot open \"" + destination + "\" for writing");
  out << content;
  out.flush();
  if (!out) throw io_error("failed writing to \"" + destination + "\"");
}

}  // namespace voteknap
