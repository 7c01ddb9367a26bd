#ifndef PACSLAB_CLI_RECORDS_HPP
#define PACSLAB_CLI_RECORDS_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace pacslab::cli {

enum class Provenance { closed_form, numeric_oracle, both };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::numeric_oracle: return "numeric_oracle";
    case Provenance::both: return "both";
  }
  return "unknown";
}

/// A null cell marks a value that does not exist at that point (e.g. an
/// overlap on a zero-probability branch).
using Cell = std::variant<std::monostate, long long, double, std::string>;
using Field = std::pair<std::string, Cell>;

struct ResultRecord {
  std::vector<Field> params;
  std::vector<Field> outputs;
  Provenance provenance = Provenance::closed_form;
};

struct RunResult {
  std::string scenario;
  std::string fingerprint;
  std::vector<ResultRecord> records;
  std::size_t points = 0;
  double max_deviation = 0.0;
  bool checks_passed = true;
};

/// 12 significant digits; %g switches to scientific below 1e-4.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

inline std::vector<std::string> column_names(const ResultRecord& r) {
  std::vector<std::string> cols;
  for (const auto& [k, v] : r.params) cols.push_back(k);
  for (const auto& [k, v] : r.outputs) cols.push_back(k);
  cols.emplace_back("provenance");
  return cols;
}

inline std::string to_csv(const RunResult& res) {
  if (res.records.empty()) return "\n";
  std::string out;
  const auto cols = column_names(res.records.front());
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const auto& rec : res.records) {
    bool first = true;
    auto emit = [&](const std::string& s) {
      if (!first) out += ',';
      out += s;
      first = false;
    };
    for (const auto& [k, v] : rec.params) emit(format_cell(v));
    for (const auto& [k, v] : rec.outputs) emit(format_cell(v));
    emit(std::string(to_string(rec.provenance)));
    out += '\n';
  }
  return out;
}

namespace detail {

inline nlohmann::ordered_json to_json_value(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double d = std::get<double>(c);
  if (!std::isfinite(d)) return nullptr;
  // Round through the 12-digit text form so CSV and JSON carry the same value.
  return std::stod(format_number(d));
}

}  // namespace detail

inline std::string to_json(const RunResult& res) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& rec : res.records) {
    nlohmann::ordered_json obj;
    obj["scenario"] = res.scenario;
    for (const auto& [k, v] : rec.params) obj[k] = detail::to_json_value(v);
    for (const auto& [k, v] : rec.outputs) obj[k] = detail::to_json_value(v);
    obj["provenance"] = std::string(to_string(rec.provenance));
    obj["config_fingerprint"] = res.fingerprint;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace pacslab::cli

#endif  // PACSLAB_CLI_RECORDS_HPP
