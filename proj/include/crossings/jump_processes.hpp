// Pure jump processes driven by marked point processes, and compensator integrals
// for their discontinuous crossings.
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crossings/rng.hpp"

namespace crossings {

/// Piecewise constant, right-continuous path: J(t) = initial on [0, times[0]) and
/// J(t) = values[k] on [times[k], times[k+1]).
struct JumpPath {
  double horizon = 0.0;
  double initial = 0.0;
  std::vector<double> times;   ///< strictly increasing, in (0, horizon]
  std::vector<double> values;  ///< post-jump values J(times[k])

  [[nodiscard]] std::size_t jump_count() const noexcept { return times.size(); }
  [[nodiscard]] double value_at(double t) const;
  /// J(times[k]-), the value just before jump k.
  [[nodiscard]] double left_limit(std::size_t k) const { return k == 0 ? initial : values.at(k - 1); }
};

class ExplosionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// History handed to kernels: the values J(tau_0 = 0), J(tau_1), ... drawn so far and their times.
struct MppHistory {
  std::span<const double> times;   ///< tau_0 = 0, tau_1, ...
  std::span<const double> values;  ///< J(tau_0), J(tau_1), ...
};

/// Kernel description of a marked point process (sequential construction).
struct KernelMPP {
  std::string name;
  /// Initial value J(0) ~ pi_0.
  std::function<double(Rng&)> initial;
  /// Gap until the next jump given the history; +infinity means no further jump.
  std::function<double(const MppHistory&, Rng&)> next_gap;
  /// Increment at the new jump time given the history.
  std::function<double(const MppHistory&, double time, Rng&)> next_increment;

  /// Exponential(lambda) gaps with N(0,1) increments and J(0) = 0.
  [[nodiscard]] static KernelMPP compound_poisson(double lambda);
  /// Exponential(lambda) gaps, J(0) ~ N(0, 1/2), increments N((rho-1) x_{n-1}, (1-rho^2)/2).
  [[nodiscard]] static KernelMPP poisson_autoregressive(double lambda, double rho);
  /// Inter-arrival law with all of its mass beyond every horizon; J(0) = 0.
  [[nodiscard]] static KernelMPP frozen();
};

inline constexpr std::size_t kMaxJumpsPerReplication = 1'000'000;

[[nodiscard]] std::vector<double> sample_poisson_times(double lambda, double horizon, Rng& rng);
[[nodiscard]] JumpPath sample_poisson_ar(double lambda, double rho, double horizon, Rng& rng);
[[nodiscard]] JumpPath sample_cpp(double lambda, double horizon, Rng& rng);
/// Throws ExplosionError past kMaxJumpsPerReplication jumps.
[[nodiscard]] JumpPath sample_kernel_mpp(const KernelMPP& kernel, double horizon, Rng& rng);

enum class Direction { up, down, both };

/// lambda * int_0^T g(X(t-)) dt by the trapezoidal rule on a uniform grid of step h, where
/// g(x) = (1 - Phi(u - x)) 1{x < u} (up), Phi(u - x) 1{x > u} (down), or their sum.
/// For N(0,1) marks this is E[N^d_u | background path].
[[nodiscard]] double cpp_disc_rate_integral(std::span<const double> background, double step, double level,
                                            double lambda, Direction direction);

/// The integrand g above (without lambda).
[[nodiscard]] double cpp_crossing_probability(double x, double level, Direction direction);

}  // namespace crossings
