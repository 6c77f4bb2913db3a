// Closed-form mean crossing counts and maximum-tail bounds for smooth Gaussian
// processes perturbed by jump processes.
#pragma once

#include <functional>

#include "crossings/jump_processes.hpp"
#include "crossings/numeric.hpp"

namespace crossings {

struct MeanAbsDerivative {
  double positive_part;  ///< E Zdot(0)^+ = sqrt(lambda2 / (2 pi))
  double absolute;       ///< E |Zdot(0)| = 2 E Zdot(0)^+
};

[[nodiscard]] MeanAbsDerivative mean_abs_derivative(double lambda2);

/// Stationary Gaussian Z with Gamma(0) = 1/2 plus a Poisson-autoregressive jump part.
struct PoissonArParams {
  double lambda2;
  double lambda;
  double rho;
  double horizon;

  void validate() const;
};

/// Stationary Gaussian Z with Gamma(0) = 1 plus a compound Poisson process with N(0,1) marks.
struct CppParams {
  double lambda2;
  double lambda;
  double horizon;
  double tail_tolerance = 1e-10;  ///< in (0, 1e-6]

  void validate() const;
};

struct MeanCrossings {
  double continuous;
  double discontinuous;
  double total;
};

/// E N^c_u for a constant-variance Gaussian Z: T * E[Zdot^+] * density for one direction,
/// T * E|Zdot| * density for both.
[[nodiscard]] double rice_const_var_continuous(double lambda2, double density_at_level, double horizon,
                                               Direction direction);

/// Mean up-crossings of Z + Poisson-AR: T sqrt(lambda2/2pi) phi(u) + lambda T P(X<u, Y>u),
/// (X, Y) standard bivariate normal with correlation (1 + rho)/2.
[[nodiscard]] MeanCrossings poisson_ar_upcrossings(const PoissonArParams& p, double level, const Quadrature& q = {});

/// Number of mixture terms kept by cpp_mixture_density.
[[nodiscard]] int cpp_mixture_terms(double lambda, double horizon, double tol);

/// p(u) = sum_{n>=1} p_n phi_n(u), p_n = P(nu_T >= n) / (lambda T). The series stops at the
/// first n > lambda T with p_n < tol; the neglected density is below tol * (terms left) / sqrt(2 pi n).
[[nodiscard]] double cpp_mixture_density(double level, double lambda, double horizon, double tol = 1e-10);

/// Mean up-crossings of Z + CPP: T sqrt(lambda2/2pi) p(u) + lambda T int_{-inf}^u (1 - Phi(u-x)) p(x) dx.
[[nodiscard]] MeanCrossings cpp_upcrossings(const CppParams& c, double level, const Quadrature& q = {});

/// P(M(T) > u) <= 1 - Phi(u) + T sqrt(lambda2/2pi) phi(u) + lambda T P(X<u, Y>u), clipped at 1.
[[nodiscard]] double max_tail_upper_bound(const PoissonArParams& p, double level, const Quadrature& q = {});

/// E N^c_u = int_0^T dt int E(|Zdot(t)| | Z(t)=v) p_Z(t)(v) p_J(t)(u - v) dv by nested quadrature.
/// The inner integral runs over the jump value x = u - v, split at x = 0 with endpoint
/// clustering so that sharply concentrated jump laws are resolved.
[[nodiscard]] double general_rice_convolution(const std::function<double(double, double)>& cond_mean_abs_deriv,
                                              const std::function<double(double, double)>& smooth_density,
                                              const std::function<double(double, double)>& jump_density,
                                              double level, double horizon, const Quadrature& q = {});

}  // namespace crossings
