#include "crossings/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace crossings {

bool RiceReport::all_agree() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.agreement.value_or(true); });
}

bool RiceReport::all_sandwiched() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.sandwich.value_or(true); });
}

std::vector<std::pair<std::string, std::optional<double>>> numeric_fields(const ReportRow& row) {
  std::vector<std::pair<std::string, std::optional<double>>> f;
  auto scalar = [&f](const char* name, const std::optional<double>& v) { f.emplace_back(name, v); };
  auto estimate = [&f](const std::string& name, const std::optional<MCEstimate>& e) {
    f.emplace_back(name, e ? std::optional<double>(e->mean) : std::nullopt);
    f.emplace_back(name + "_se", e ? std::optional<double>(e->se) : std::nullopt);
  };
  scalar("level", row.level);
  scalar("analytic_continuous", row.analytic_continuous);
  scalar("analytic_continuous_se", row.analytic_continuous_se);
  scalar("analytic_discontinuous", row.analytic_discontinuous);
  scalar("analytic_total", row.analytic_total);
  estimate("mc_cont_up", row.cont_up);
  estimate("mc_cont_down", row.cont_down);
  estimate("mc_disc_up", row.disc_up);
  estimate("mc_disc_down", row.disc_down);
  estimate("mc_cont_total", row.cont_total);
  estimate("compensator_up", row.compensator_up);
  scalar("net_lhs", row.net_lhs);
  scalar("net_rhs", row.net_rhs);
  scalar("net_se", row.net_se);
  estimate("max_exceed", row.exceed);
  estimate("tail_lower", row.tail_lower);
  estimate("tail_upper", row.tail_upper);
  scalar("tail_analytic_upper", row.tail_analytic_upper);
  return f;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return {buf.data(), res.ptr};
}

namespace {

// Columns present in at least one row, so CSV headers stay stable within a report.
std::vector<std::string> used_columns(const RiceReport& report) {
  std::vector<std::string> names;
  std::vector<bool> used;
  for (const ReportRow& row : report.rows) {
    const auto fields = numeric_fields(row);
    if (names.empty()) {
      for (const auto& [name, value] : fields) names.push_back(name);
      used.assign(names.size(), false);
    }
    for (std::size_t k = 0; k < fields.size(); ++k) used[k] = used[k] || fields[k].second.has_value();
  }
  std::vector<std::string> out;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (used[k]) out.push_back(names[k]);
  }
  return out;
}

std::string flag(const std::optional<bool>& b) {
  if (!b) return "";
  return *b ? "true" : "false";
}

}  // namespace

std::string to_csv(const RiceReport& report) {
  const std::vector<std::string> columns = used_columns(report);
  const bool any_agree = std::any_of(report.rows.begin(), report.rows.end(), [](const ReportRow& r) { return r.agreement.has_value(); });
  const bool any_sandwich = std::any_of(report.rows.begin(), report.rows.end(), [](const ReportRow& r) { return r.sandwich.has_value(); });
  std::ostringstream out;
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  if (any_agree) out << ",agreement";
  if (any_sandwich) out << ",sandwich";
  out << '\n';
  for (const ReportRow& row : report.rows) {
    const auto fields = numeric_fields(row);
    bool first = true;
    for (const auto& [name, value] : fields) {
      if (std::find(columns.begin(), columns.end(), name) == columns.end()) continue;
      out << (first ? "" : ",") << (value ? format_double(*value) : "");
      first = false;
    }
    if (any_agree) out << ',' << flag(row.agreement);
    if (any_sandwich) out << ',' << flag(row.sandwich);
    out << '\n';
  }
  return out.str();
}

std::string to_json(const RiceReport& report) {
  nlohmann::ordered_json doc;
  doc["name"] = report.name;
  doc["command"] = report.command;
  doc["process"] = report.process;
  doc["seed"] = report.seed;
  doc["reps"] = report.reps;
  doc["failed_replications"] = report.failed;
  if (report.diagnostics_passed) doc["diagnostics_passed"] = *report.diagnostics_passed;
  if (!report.message.empty()) doc["message"] = report.message;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::ordered_json r;
    for (const auto& [name, value] : numeric_fields(row)) {
      if (value) r[name] = *value;
    }
    if (row.agreement) r["agreement"] = *row.agreement;
    if (row.sandwich) r["sandwich"] = *row.sandwich;
    rows.push_back(std::move(r));
  }
  doc["levels"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string to_table(const RiceReport& report) {
  std::ostringstream out;
  out << report.command << ": " << report.name << " (" << report.process << ")";
  if (report.reps > 0) out << ", reps " << report.reps << ", seed " << report.seed;
  if (report.failed > 0) out << ", failed " << report.failed;
  out << '\n';
  if (!report.message.empty()) out << report.message << '\n';
  const std::vector<std::string> columns = used_columns(report);
  if (columns.empty()) return out.str();
  std::vector<std::string> shown;
  for (const auto& c : columns) {
    if (c.size() < 3 || c.compare(c.size() - 3, 3, "_se") != 0) shown.push_back(c);
  }
  constexpr int kWidth = 14;
  out << std::left;
  for (const auto& c : shown) out << std::setw(static_cast<int>(std::max<std::size_t>(kWidth, c.size() + 1))) << c;
  out << "flags\n";
  for (const ReportRow& row : report.rows) {
    const auto fields = numeric_fields(row);
    for (const auto& c : shown) {
      const auto it = std::find_if(fields.begin(), fields.end(), [&c](const auto& f) { return f.first == c; });
      std::ostringstream cell;
      if (it != fields.end() && it->second) cell << std::setprecision(6) << *it->second;
      out << std::setw(static_cast<int>(std::max<std::size_t>(kWidth, c.size() + 1))) << cell.str();
    }
    if (row.agreement) out << (*row.agreement ? "agree " : "DISAGREE ");
    if (row.sandwich) out << (*row.sandwich ? "sandwich-ok" : "SANDWICH-FAIL");
    out << '\n';
  }
  return out.str();
}

void write_report(const RiceReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
  };
  write(dir / "report.csv", to_csv(report));
  write(dir / "report.json", to_json(report));

  if (report.rows.empty()) return;
  const auto names = numeric_fields(report.rows.front());
  for (std::size_t k = 1; k < names.size(); ++k) {
    const std::string& curve = names[k].first;
    if (curve.size() >= 3 && curve.compare(curve.size() - 3, 3, "_se") == 0) continue;
    const bool complete = std::all_of(report.rows.begin(), report.rows.end(),
                                      [k](const ReportRow& r) { return numeric_fields(r)[k].second.has_value(); });
    if (!complete) continue;
    std::ostringstream dat;
    for (const ReportRow& r : report.rows) dat << format_double(r.level) << ' ' << format_double(*numeric_fields(r)[k].second) << '\n';
    write(dir / (curve + ".dat"), dat.str());
  }
}

}  // namespace crossings
