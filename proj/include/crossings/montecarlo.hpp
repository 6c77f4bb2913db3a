// Replication harness: simulate X = Z + J (or a PDMP), count crossings and maxima at every
// level, and aggregate into estimates with standard errors.
//
// Seeding contract: replication i draws Z from make_stream(seed, i, gaussian), J from
// make_stream(seed, i, jumps) and PDMPs from make_stream(seed, i, pdmp). Records are
// aggregated in index order, so results do not depend on the worker count.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "crossings/crossing_counter.hpp"
#include "crossings/gaussian_process.hpp"
#include "crossings/montecarlo_types.hpp"
#include "crossings/pdmp.hpp"

namespace crossings {

struct NoJumps {};
struct PoissonArJumps {
  double lambda;
  double rho;
};
struct CppJumps {
  double lambda;
};
/// Built-in kernels: "cpp" (lambda), "poisson_ar" (lambda, rho), "frozen".
struct KernelJumps {
  std::string kernel;
  double lambda = 0.0;
  double rho = 0.0;
};
using JumpSpec = std::variant<NoJumps, PoissonArJumps, CppJumps, KernelJumps>;

struct SmoothPlusJump {
  SpectralModel model;
  JumpSpec jumps;
};
using ProcessSpec = std::variant<SmoothPlusJump, PdmpSpec>;

struct ExperimentSpec {
  ProcessSpec process;
  std::vector<double> levels;
  double horizon = 1.0;
  double step = 1e-3;  ///< grid step; a PDMP uses its own ode_step
  std::size_t reps = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;  ///< 0 = hardware concurrency

  void validate() const;
};

/// Jump intensity of the process, 0 when there are no jumps.
[[nodiscard]] double jump_intensity(const ProcessSpec& process);
/// True when the jumps form a CPP with N(0,1) marks, so its compensator is lambda dt Phi(dy).
[[nodiscard]] bool has_gaussian_cpp_compensator(const ProcessSpec& process);

struct ReplicationRecord {
  double x0 = 0.0;
  double max = 0.0;
  std::vector<CrossingCounts> counts;   ///< one per level
  std::vector<double> compensator_up;   ///< lambda int g_up(X(t-)) dt per level (CPP only)
};

struct LevelEstimates {
  double level = 0.0;
  MCEstimate cont_up, cont_down, disc_up, disc_down;
  MCEstimate up_total;            ///< U_u
  MCEstimate up_factorial2;       ///< U_u (U_u - 1)
  MCEstimate exceed;              ///< 1{M(T) > u}
  MCEstimate x0_above;            ///< 1{X(0) > u}
  MCEstimate x0_below_crossed;    ///< 1{X(0) < u, U_u >= 1}
  MCEstimate up_and_x0_above;     ///< 1{U_u >= 1, X(0) > u}
  MCEstimate lower_statistic;     ///< 1{X(0)>u} + U - U(U-1)/2 - 1{U>=1, X(0)>u}
  std::optional<MCEstimate> compensator_up;
  /// Replications where 1{M>u} != 1{X(0)>u} + 1{X(0)<u, U>=1} (ties at u only).
  std::size_t decomposition_mismatches = 0;
};

struct ReplicationResult {
  std::uint64_t seed = 0;
  std::size_t requested = 0;
  std::size_t failed = 0;
  std::vector<ReplicationRecord> records;  ///< successful replications in index order
  std::vector<LevelEstimates> levels;
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulates one replication (exposed for tests).
[[nodiscard]] HybridPath simulate_replication(const ExperimentSpec& spec, std::size_t index);

/// Throws ExperimentError when more than 0.1% of replications fail.
[[nodiscard]] ReplicationResult run_replications(const ExperimentSpec& spec);

[[nodiscard]] MCEstimate estimate_factorial_moment2(std::span<const std::int64_t> counts, std::uint64_t seed = 0);

struct MaxTailEstimate {
  MCEstimate exceed;            ///< P(M(T) > u)
  MCEstimate x0_above;          ///< P(X(0) > u)
  MCEstimate x0_below_crossed;  ///< P(X(0) < u, U_u >= 1)
  std::size_t decomposition_mismatches = 0;
};

[[nodiscard]] MaxTailEstimate estimate_max_tail(const ReplicationResult& result, std::size_t level_index);
[[nodiscard]] MaxTailEstimate estimate_max_tail(const ExperimentSpec& spec, double level);

struct TailBounds {
  double lower;           ///< P(X0>u) + E U - E U_[2] / 2 - P(U>=1, X0>u); may be negative
  double upper;           ///< P(X0>u) + E U
  double analytic_upper;  ///< passed through
};

[[nodiscard]] TailBounds assemble_tail_bounds(double analytic_upper, double mean_up, double mean_up_factorial2,
                                              double prob_up_and_x0_above, double prob_x0_above);

}  // namespace crossings
