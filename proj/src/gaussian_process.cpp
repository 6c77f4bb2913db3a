#include "crossings/gaussian_process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crossings {

SpectralModel::SpectralModel(std::vector<SpectralAtom> atoms, std::optional<double> target_variance)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("spectral model needs at least one atom");
  for (const auto& atom : atoms_) {
    if (!std::isfinite(atom.weight) || atom.weight < 0.0) throw std::invalid_argument("atom weight must be finite and >= 0");
    if (!std::isfinite(atom.frequency) || atom.frequency < 0.0) {
      throw std::invalid_argument("atom frequency must be finite and >= 0");
    }
    variance_ += atom.weight;
    lambda2_ += atom.weight * atom.frequency * atom.frequency;
  }
  if (!(variance_ > 0.0)) throw std::invalid_argument("spectral model is degenerate: Gamma(0) = 0");
  if (!(lambda2_ > 0.0)) throw std::invalid_argument("spectral model has zero second spectral moment");
  if (target_variance && std::abs(variance_ - *target_variance) > 1e-12) {
    std::ostringstream msg;
    msg << "spectral model variance " << variance_ << " differs from the required " << *target_variance;
    throw std::invalid_argument(msg.str());
  }
}

double SpectralModel::covariance(double tau) const noexcept {
  double sum = 0.0;
  for (const auto& atom : atoms_) sum += atom.weight * std::cos(atom.frequency * tau);
  return sum;
}

double SpectralModel::covariance_derivative(double tau) const noexcept {
  double sum = 0.0;
  for (const auto& atom : atoms_) sum -= atom.weight * atom.frequency * std::sin(atom.frequency * tau);
  return sum;
}

namespace {

// Golden-section maximization of |Gamma| on [lo, hi].
double refine_peak(const SpectralModel& model, double lo, double hi, double& peak_tau) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&model](double t) { return std::abs(model.covariance(t)); };
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = f(d);
    }
  }
  peak_tau = 0.5 * (lo + hi);
  return f(peak_tau);
}

}  // namespace

ModelDiagnostics validate_model(const SpectralModel& model, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("validate_model: horizon must be > 0");
  constexpr std::size_t kPoints = 10000;
  const double gamma0 = model.variance();
  const double threshold = gamma0 - 1e-9;
  const double dt = horizon / static_cast<double>(kPoints);

  std::vector<double> grid(kPoints + 1);
  for (std::size_t j = 1; j <= kPoints; ++j) grid[j] = std::abs(model.covariance(dt * static_cast<double>(j)));

  ModelDiagnostics diag;
  auto consider = [&](double tau, double value) {
    diag.max_abs_covariance = std::max(diag.max_abs_covariance, value);
    if (value >= threshold && (!diag.violation_tau || tau < *diag.violation_tau)) {
      diag.violation_tau = tau;
      diag.violation_value = model.covariance(tau);
    }
  };
  for (std::size_t j = 1; j <= kPoints; ++j) {
    const double tau = dt * static_cast<double>(j);
    consider(tau, grid[j]);
    // Interior local maxima of the sampled |Gamma| are refined; the rise towards tau = 0 is not a peak.
    if (j >= 2 && j < kPoints && grid[j] >= grid[j - 1] && grid[j] >= grid[j + 1]) {
      double peak_tau = tau;
      const double peak = refine_peak(model, tau - dt, tau + dt, peak_tau);
      consider(peak_tau, peak);
    }
  }

  std::ostringstream msg;
  if (diag.violation_tau) {
    diag.passed = false;
    msg.precision(10);
    msg << "|Gamma(tau)| reaches Gamma(0) at tau = " << *diag.violation_tau << " (Gamma = " << diag.violation_value
        << "); the non-degeneracy condition Gamma(tau) != +-Gamma(0) fails on (0, " << horizon << "]";
  } else {
    msg << "|Gamma(tau)| < Gamma(0) on (0, " << horizon << "]; Geman condition holds for the analytic covariance";
  }
  diag.message = msg.str();
  return diag;
}

HarmonicRealization::HarmonicRealization(const SpectralModel& model, Rng& rng) : model_(&model) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto atoms = model.atoms();
  cos_coef_.reserve(atoms.size());
  sin_coef_.reserve(atoms.size());
  for (const auto& atom : atoms) {
    const double sd = std::sqrt(atom.weight);
    const double xi = normal(rng);
    const double eta = normal(rng);
    cos_coef_.push_back(sd * xi);
    sin_coef_.push_back(sd * eta);
  }
}

double HarmonicRealization::value(double t) const noexcept {
  const auto atoms = model_->atoms();
  double sum = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double arg = atoms[k].frequency * t;
    sum += cos_coef_[k] * std::cos(arg) + sin_coef_[k] * std::sin(arg);
  }
  return sum;
}

double HarmonicRealization::derivative(double t) const noexcept {
  const auto atoms = model_->atoms();
  double sum = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double w = atoms[k].frequency;
    const double arg = w * t;
    sum += w * (sin_coef_[k] * std::cos(arg) - cos_coef_[k] * std::sin(arg));
  }
  return sum;
}

std::size_t grid_intervals(double horizon, double step) {
  if (!(horizon > 0.0) || !(step > 0.0)) throw std::invalid_argument("grid: horizon and step must be > 0");
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0) throw std::invalid_argument("grid: empty grid (step exceeds horizon)");
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("grid: horizon / step must be an integer");
  }
  return static_cast<std::size_t>(rounded);
}

HarmonicGrid::HarmonicGrid(const SpectralModel& model, double horizon, double step)
    : model_(&model), horizon_(horizon), step_(step), points_(grid_intervals(horizon, step) + 1) {
  const auto atoms = model.atoms();
  cos_table_.resize(atoms.size() * points_);
  sin_table_.resize(atoms.size() * points_);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    for (std::size_t i = 0; i < points_; ++i) {
      const double arg = atoms[k].frequency * step * static_cast<double>(i);
      cos_table_[k * points_ + i] = std::cos(arg);
      sin_table_[k * points_ + i] = std::sin(arg);
    }
  }
}

void HarmonicGrid::values(const HarmonicRealization& z, std::span<double> out) const {
  if (out.size() != points_) throw std::invalid_argument("HarmonicGrid::values: output size mismatch");
  const auto a = z.cos_coefficients();
  const auto b = z.sin_coefficients();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double* c = cos_table_.data() + k * points_;
    const double* s = sin_table_.data() + k * points_;
    for (std::size_t i = 0; i < points_; ++i) out[i] += a[k] * c[i] + b[k] * s[i];
  }
}

void HarmonicGrid::derivatives(const HarmonicRealization& z, std::span<double> out) const {
  if (out.size() != points_) throw std::invalid_argument("HarmonicGrid::derivatives: output size mismatch");
  const auto atoms = model_->atoms();
  const auto a = z.cos_coefficients();
  const auto b = z.sin_coefficients();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = atoms[k].frequency;
    const double* c = cos_table_.data() + k * points_;
    const double* s = sin_table_.data() + k * points_;
    for (std::size_t i = 0; i < points_; ++i) out[i] += w * (b[k] * c[i] - a[k] * s[i]);
  }
}

SmoothPathSample sample_gaussian_path(const SpectralModel& model, double horizon, double step, Rng& rng) {
  const HarmonicGrid grid(model, horizon, step);
  const HarmonicRealization z(model, rng);
  SmoothPathSample sample;
  sample.step = step;
  sample.values.resize(grid.size());
  sample.derivatives.resize(grid.size());
  grid.values(z, sample.values);
  grid.derivatives(z, sample.derivatives);
  return sample;
}

}  // namespace crossings
