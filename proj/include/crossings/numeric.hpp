// Special functions, Gaussian/Poisson distributions and adaptive quadrature.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace crossings {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)

/// Controls for quad_adaptive.
///
/// Infinite endpoints are replaced by a finite window: a lower bound of -inf
/// becomes min(b, 0) - half_width and an upper bound of +inf becomes
/// max(a, 0) + half_width, so for a unit-scale Gaussian integrand the
/// neglected mass is below Phi(-half_width).
struct Quadrature {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 50;
  double half_width = 10.0;

  void validate() const;
};

/// Raised when bisection reaches max_depth before meeting the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}

  [[nodiscard]] double partial() const noexcept { return partial_; }
  [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

[[nodiscard]] double std_normal_pdf(double x);
[[nodiscard]] double std_normal_cdf(double x);
/// 1 - Phi(x), accurate in the far right tail.
[[nodiscard]] double std_normal_sf(double x);

/// Centered Gaussian density with variance `variance`.
[[nodiscard]] double gauss_density_var(double x, double variance);

/// P(X < u, Y > u) for a standardized bivariate normal pair with correlation r.
[[nodiscard]] double bvn_rect_upper(double u, double r, const Quadrature& q = {});

[[nodiscard]] double poisson_pmf(std::int64_t n, double mean);
/// P(nu >= n) for nu ~ Poisson(mean).
[[nodiscard]] double poisson_tail(std::int64_t n, double mean);

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) integration with recursive bisection.
[[nodiscard]] double quad_adaptive(const Integrand& f, double a, double b, const Quadrature& q = {});

}  // namespace crossings
