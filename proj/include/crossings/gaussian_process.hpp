// Stationary centered Gaussian processes with a finite spectral (harmonic) representation:
//   Z(t) = sum_k sigma_k (xi_k cos(w_k t) + eta_k sin(w_k t)),  xi_k, eta_k iid N(0,1).
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crossings/rng.hpp"

namespace crossings {

struct SpectralAtom {
  double weight;     ///< variance contribution sigma_k^2 >= 0
  double frequency;  ///< angular frequency w_k >= 0
};

/// Immutable finite-atom spectral model; owns the covariance and its second spectral moment.
class SpectralModel {
 public:
  /// Throws std::invalid_argument for negative weights/frequencies, zero total
  /// variance, zero second spectral moment, or a variance that misses
  /// `target_variance` by more than 1e-12.
  explicit SpectralModel(std::vector<SpectralAtom> atoms, std::optional<double> target_variance = std::nullopt);

  [[nodiscard]] std::span<const SpectralAtom> atoms() const noexcept { return atoms_; }
  [[nodiscard]] double variance() const noexcept { return variance_; }
  [[nodiscard]] double covariance(double tau) const noexcept;
  /// Gamma'(tau).
  [[nodiscard]] double covariance_derivative(double tau) const noexcept;
  [[nodiscard]] double second_spectral_moment() const noexcept { return lambda2_; }

 private:
  std::vector<SpectralAtom> atoms_;
  double variance_ = 0.0;
  double lambda2_ = 0.0;
};

[[nodiscard]] inline double covariance(const SpectralModel& model, double tau) { return model.covariance(tau); }
[[nodiscard]] inline double second_spectral_moment(const SpectralModel& model) {
  return model.second_spectral_moment();
}

struct ModelDiagnostics {
  bool passed = true;
  /// First tau in (0, T] where |Gamma(tau)| >= Gamma(0) - 1e-9, if any.
  std::optional<double> violation_tau;
  double violation_value = 0.0;
  /// Largest |Gamma(tau)| on (0, T] after local refinement.
  double max_abs_covariance = 0.0;
  /// Always true for a cosine polynomial: theta(tau) = O(tau^4).
  bool geman_condition = true;
  std::string message;
};

/// Scans Gamma on a 10^4-point grid of (0, T] and refines every local maximum of |Gamma|.
[[nodiscard]] ModelDiagnostics validate_model(const SpectralModel& model, double horizon);

/// One draw of the spectral coefficients; evaluates Z and Zdot anywhere on the time axis.
class HarmonicRealization {
 public:
  HarmonicRealization(const SpectralModel& model, Rng& rng);

  [[nodiscard]] double value(double t) const noexcept;
  [[nodiscard]] double derivative(double t) const noexcept;
  [[nodiscard]] std::span<const double> cos_coefficients() const noexcept { return cos_coef_; }
  [[nodiscard]] std::span<const double> sin_coefficients() const noexcept { return sin_coef_; }

 private:
  const SpectralModel* model_;
  std::vector<double> cos_coef_;  // sigma_k * xi_k
  std::vector<double> sin_coef_;  // sigma_k * eta_k
};

/// cos/sin tables of every atom on a uniform grid, shared by all replications of an experiment.
class HarmonicGrid {
 public:
  HarmonicGrid(const SpectralModel& model, double horizon, double step);

  [[nodiscard]] std::size_t size() const noexcept { return points_; }
  [[nodiscard]] double step() const noexcept { return step_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  void values(const HarmonicRealization& z, std::span<double> out) const;
  void derivatives(const HarmonicRealization& z, std::span<double> out) const;

 private:
  const SpectralModel* model_;
  double horizon_;
  double step_;
  std::size_t points_;
  std::vector<double> cos_table_;  // [atom * points + i]
  std::vector<double> sin_table_;
};

/// Number of grid intervals of [0, T] with step h; rejects T/h that is not (close to) an integer.
[[nodiscard]] std::size_t grid_intervals(double horizon, double step);

struct SmoothPathSample {
  double step = 0.0;
  std::vector<double> values;       ///< Z(i h), i = 0..n
  std::vector<double> derivatives;  ///< Zdot(i h)

  [[nodiscard]] double time(std::size_t i) const noexcept { return step * static_cast<double>(i); }
};

[[nodiscard]] SmoothPathSample sample_gaussian_path(const SpectralModel& model, double horizon, double step, Rng& rng);

}  // namespace crossings
