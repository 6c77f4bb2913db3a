// Piecewise deterministic Markov processes: deterministic flow dx/dt = mu(x) between
// Poisson jump times, jumps drawn from a state-dependent mark kernel.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "crossings/crossing_counter.hpp"
#include "crossings/montecarlo_types.hpp"
#include "crossings/rng.hpp"

namespace crossings {

struct NormalLaw {
  double mean = 0.0;
  double sd = 1.0;
};
struct PointLaw {
  double value = 0.0;
};
using InitialLaw = std::variant<NormalLaw, PointLaw>;

[[nodiscard]] double draw(const InitialLaw& law, Rng& rng);

struct PdmpSpec {
  std::function<double(double)> drift;                  ///< mu(x)
  InitialLaw initial = NormalLaw{};                     ///< law of X(0)
  double lambda = 0.0;                                  ///< constant jump intensity
  std::function<double(double, Rng&)> mark;             ///< increment given the pre-jump state
  double ode_step = 1e-3;
  double horizon = 1.0;

  void validate() const;

  /// mu(x) = a x + b.
  [[nodiscard]] static std::function<double(double)> linear_drift(double a, double b);
  /// Increment ~ N(mean, sd^2) regardless of the state.
  [[nodiscard]] static std::function<double(double, Rng&)> normal_mark(double mean, double sd);
};

/// Classical RK4 on the grid of step ode_step; each jump time is an exact breakpoint
/// (integrate to tau, record X(tau-), add the mark, restart). Throws std::domain_error
/// on a non-finite state.
[[nodiscard]] HybridPath simulate_pdmp(const PdmpSpec& spec, Rng& rng);

/// |mu(u)| * int_0^T p_X(t)(u) dt. Rejects mu(u) = 0.
[[nodiscard]] double bl_mean_continuous(double drift_at_level, double density_integral);

/// Occupation-time estimator E[Leb{t : |X(t) - u| < delta}] / (2 delta) of int_0^T p_X(t)(u) dt.
[[nodiscard]] MCEstimate occupation_density_integral(const PdmpSpec& spec, double level, double delta,
                                                     std::size_t reps, std::uint64_t seed, unsigned threads = 1);

struct NetCrossingCheck {
  double lhs;  ///< E D^d_u - E U^d_u
  double rhs;  ///< sgn(mu(u)) E N^c_u + P(X(T) < u) - P(X(0) < u)
  double combined_se;
  std::size_t replications;
  double mean_continuous;  ///< E N^c_u
  double continuous_se;
  bool direction_exclusive;  ///< every continuous crossing had the direction of sgn(mu(u))
};

[[nodiscard]] NetCrossingCheck net_jump_crossing_check(const PdmpSpec& spec, double level, std::size_t reps,
                                                       std::uint64_t seed, unsigned threads = 1);

}  // namespace crossings
