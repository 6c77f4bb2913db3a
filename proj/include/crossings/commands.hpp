// CLI subcommands and the argument-level entry point.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crossings/config.hpp"
#include "crossings/report.hpp"

namespace crossings {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_disagreement = 2, exit_runtime = 3 };

/// Analytic columns only.
[[nodiscard]] RiceReport cmd_analytic(const Config& config);
/// Monte Carlo columns only.
[[nodiscard]] RiceReport cmd_simulate(const Config& config);
/// Analytic and Monte Carlo columns with agreement flags (|analytic - MC| <= 3 SE).
[[nodiscard]] RiceReport cmd_compare(const Config& config);
/// Empirical P(M(T) > u) with the assembled lower/upper bounds and the analytic upper bound.
[[nodiscard]] RiceReport cmd_tail(const Config& config);
/// validate_model diagnostics for the spectral model on (0, T].
[[nodiscard]] RiceReport cmd_validate(const Config& config);

/// `args` excludes the program name:
///   analytic|simulate|compare|tail|validate <config> [--out DIR] [--seed N] [--reps N] [--threads N]
/// CROSSINGS_LAB_THREADS supplies the default for --threads.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crossings
