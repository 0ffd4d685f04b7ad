#pragma once

// Report rows and their CSV / JSON / plot-data serializations. Output bytes
// depend only on the rows, never on timing or thread count.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmt/rational.hpp"

namespace rmt {

enum class Verdict { pass, fail, info };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::info: return "INFO";
  }
  return "?";
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

/// Fixed 17 significant digits: round-trips every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ReportRow {
  std::string quantity;
  std::optional<long> k, q, N, b;
  std::string value;
  std::string std_error;
  std::string reference;
  Verdict verdict = Verdict::info;
};

struct PlotPoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double yerr = 0.0;
};

struct Report {
  std::string command;
  std::vector<ReportRow> rows;
  std::vector<PlotPoint> plot;

  std::size_t count(Verdict v) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.verdict == v;
    return n;
  }
  bool all_pass() const { return count(Verdict::fail) == 0; }

  void append(const Report& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    plot.insert(plot.end(), other.plot.begin(), other.plot.end());
  }
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_field(const std::optional<long>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace detail

inline constexpr const char* kCsvHeader = "quantity,k,q,N,b,value,stderr,reference,verdict";

inline void write_csv(std::ostream& os, const Report& report) {
  using detail::csv_field;
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows)
    os << csv_field(r.quantity) << ',' << csv_field(r.k) << ',' << csv_field(r.q) << ',' << csv_field(r.N) << ','
       << csv_field(r.b) << ',' << csv_field(r.value) << ',' << csv_field(r.std_error) << ','
       << csv_field(r.reference) << ',' << to_string(r.verdict) << '\n';
}

inline nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["quantity"] = r.quantity;
    auto opt = [&](const char* key, const std::optional<long>& v) {
      row[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    opt("k", r.k);
    opt("q", r.q);
    opt("N", r.N);
    opt("b", r.b);
    row["value"] = r.value;
    row["stderr"] = r.std_error;
    row["reference"] = r.reference;
    row["verdict"] = to_string(r.verdict);
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json out;
  out["command"] = report.command;
  out["rows"] = std::move(rows);
  out["summary"] = {{"pass", report.count(Verdict::pass)},
                    {"fail", report.count(Verdict::fail)},
                    {"info", report.count(Verdict::info)}};
  return out;
}

inline void write_json(std::ostream& os, const Report& report) { os << to_json(report).dump(2) << '\n'; }

/// Long-format plot table: series,x,y,yerr. An empty report gives the header only.
inline void emit_plot_data(std::ostream& os, const Report& report) {
  os << "series,x,y,yerr\n";
  for (const auto& p : report.plot)
    os << detail::csv_field(p.series) << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
       << format_double(p.yerr) << '\n';
}

}  // namespace rmt
