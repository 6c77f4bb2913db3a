// Per-level report rows and their CSV, JSON and plot-file serializations.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crossings/montecarlo_types.hpp"

namespace crossings {

struct ReportRow {
  double level = 0.0;
  // Analytic columns. For a PDMP the continuous value is |mu(u)| times an occupation-time
  // estimate and carries a standard error; otherwise the SE is absent.
  std::optional<double> analytic_continuous;
  std::optional<double> analytic_continuous_se;
  std::optional<double> analytic_discontinuous;
  std::optional<double> analytic_total;
  // Monte Carlo columns.
  std::optional<MCEstimate> cont_up, cont_down, disc_up, disc_down;
  std::optional<MCEstimate> cont_total;      ///< cont_up + cont_down per replication
  std::optional<MCEstimate> compensator_up;  ///< lambda int (1 - Phi(u - X(t-))) dt
  // Net jump-crossing identity (PDMP only).
  std::optional<double> net_lhs, net_rhs, net_se;
  // Maximum tail.
  std::optional<MCEstimate> exceed;
  std::optional<MCEstimate> tail_lower;
  std::optional<MCEstimate> tail_upper;
  std::optional<double> tail_analytic_upper;
  std::optional<bool> agreement;  ///< analytic vs MC, |difference| <= 3 SE
  std::optional<bool> sandwich;   ///< lower - 3 SE <= P(M > u) <= upper + 3 SE
};

struct RiceReport {
  std::string name;
  std::string command;
  std::string process;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::size_t failed = 0;
  std::vector<ReportRow> rows;
  std::optional<bool> diagnostics_passed;  ///< validate only
  std::string message;

  [[nodiscard]] bool all_agree() const;
  [[nodiscard]] bool all_sandwiched() const;
};

/// Flattened numeric columns of a row, in CSV order; absent values are nullopt.
[[nodiscard]] std::vector<std::pair<std::string, std::optional<double>>> numeric_fields(const ReportRow& row);

/// Shortest decimal string that parses back to exactly `x`.
[[nodiscard]] std::string format_double(double x);

[[nodiscard]] std::string to_csv(const RiceReport& report);
[[nodiscard]] std::string to_json(const RiceReport& report);
[[nodiscard]] std::string to_table(const RiceReport& report);

/// Writes report.csv, report.json and one "<curve>.dat" file per numeric column that is
/// present at every level. Creates `dir` if needed.
void write_report(const RiceReport& report, const std::filesystem::path& dir);

}  // namespace crossings
