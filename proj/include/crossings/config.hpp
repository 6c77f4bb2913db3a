// Experiment configuration: a single JSON document, validated before any computation.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crossings/montecarlo.hpp"
#include "crossings/numeric.hpp"

namespace crossings {

enum class ProcessKind { gaussian, poisson_ar, cpp, kernel, pdmp };

[[nodiscard]] std::string_view to_string(ProcessKind kind);

/// Linear PDMP drift mu(x) = a x + b.
struct LinearDrift {
  double a = 0.0;
  double b = 0.0;
  [[nodiscard]] double operator()(double x) const noexcept { return a * x + b; }
};

struct Config {
  std::string name;
  ProcessKind kind;
  std::string kernel;  ///< built-in kernel name when kind == kernel
  ExperimentSpec experiment;
  std::optional<LinearDrift> drift;  ///< pdmp only
  std::filesystem::path output_dir;
  Quadrature quadrature;
  double series_tol = 1e-10;
  double occupation_delta = 0.01;

  /// The spectral model, or nullptr for a PDMP.
  [[nodiscard]] const SpectralModel* model() const;
};

/// Carries the offending field path ("process.rho") or the document line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Defaults: T = 1, h = 1e-3 T, reps = 1e5, seed = 0, tol = 1e-10, output "out".
[[nodiscard]] Config parse_config(std::string_view text);
[[nodiscard]] Config load_config(const std::filesystem::path& path);

}  // namespace crossings
