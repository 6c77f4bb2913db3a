#include "crossings/pdmp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crossings/gaussian_process.hpp"

namespace crossings {

double draw(const InitialLaw& law, Rng& rng) {
  if (const auto* normal = std::get_if<NormalLaw>(&law)) {
    return std::normal_distribution<double>(normal->mean, normal->sd)(rng);
  }
  return std::get<PointLaw>(law).value;
}

void PdmpSpec::validate() const {
  if (!drift) throw std::invalid_argument("pdmp: drift function is missing");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("pdmp: lambda must be finite and >= 0");
  if (lambda > 0.0 && !mark) throw std::invalid_argument("pdmp: mark kernel is missing");
  if (!(ode_step > 0.0)) throw std::invalid_argument("pdmp: h_ode must be > 0");
  if (const auto* normal = std::get_if<NormalLaw>(&initial); normal && !(normal->sd > 0.0)) {
    throw std::invalid_argument("pdmp: initial normal sd must be > 0");
  }
  (void)grid_intervals(horizon, ode_step);
}

std::function<double(double)> PdmpSpec::linear_drift(double a, double b) {
  return [a, b](double x) { return a * x + b; };
}

std::function<double(double, Rng&)> PdmpSpec::normal_mark(double mean, double sd) {
  if (!(sd >= 0.0)) throw std::invalid_argument("pdmp: mark sd must be >= 0");
  return [mean, sd](double, Rng& rng) { return mean + sd * std::normal_distribution<double>(0.0, 1.0)(rng); };
}

namespace {

double rk4_step(const std::function<double(double)>& mu, double x, double dt) {
  const double k1 = mu(x);
  const double k2 = mu(x + 0.5 * dt * k1);
  const double k3 = mu(x + 0.5 * dt * k2);
  const double k4 = mu(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw std::domain_error("pdmp: state became non-finite");
}

}  // namespace

HybridPath simulate_pdmp(const PdmpSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = grid_intervals(spec.horizon, spec.ode_step);
  HybridPath path;
  path.step = spec.ode_step;
  path.values.resize(n + 1);

  double x = draw(spec.initial, rng);
  require_finite(x);
  path.values[0] = x;

  const double inf = std::numeric_limits<double>::infinity();
  std::exponential_distribution<double> gap(spec.lambda > 0.0 ? spec.lambda : 1.0);
  double next_jump = spec.lambda > 0.0 ? gap(rng) : inf;

  double t = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double grid_t = path.time(i);
    while (next_jump <= grid_t) {
      x = rk4_step(spec.drift, x, next_jump - t);
      require_finite(x);
      const double left = x;
      x += spec.mark(left, rng);
      require_finite(x);
      path.jumps.push_back({next_jump, left, x});
      if (path.jumps.size() > kMaxJumpsPerReplication) throw ExplosionError("pdmp exceeded the jump guard");
      t = next_jump;
      next_jump += gap(rng);
    }
    if (grid_t > t) x = rk4_step(spec.drift, x, grid_t - t);
    require_finite(x);
    t = grid_t;
    path.values[i] = x;
  }
  return path;
}

double bl_mean_continuous(double drift_at_level, double density_integral) {
  if (drift_at_level == 0.0) {
    throw std::invalid_argument("level lies in the zero set of the drift; the crossing formula does not apply");
  }
  if (!(density_integral >= 0.0)) throw std::invalid_argument("density integral must be >= 0");
  return std::abs(drift_at_level) * density_integral;
}

MCEstimate occupation_density_integral(const PdmpSpec& spec, double level, double delta, std::size_t reps,
                                       std::uint64_t seed, unsigned threads) {
  spec.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("occupation window delta must be > 0");
  if (reps < 2) throw std::invalid_argument("occupation estimate needs at least two replications");
  const auto samples = parallel_map(reps, threads, [&](std::size_t i) {
    Rng rng = make_stream(seed, i, Substream::pdmp);
    const HybridPath path = simulate_pdmp(spec, rng);
    return occupation_time(path, level, delta) / (2.0 * delta);
  });
  return estimate_mean(samples, seed);
}

NetCrossingCheck net_jump_crossing_check(const PdmpSpec& spec, double level, std::size_t reps, std::uint64_t seed,
                                         unsigned threads) {
  spec.validate();
  const double mu_u = spec.drift(level);
  if (mu_u == 0.0) throw std::invalid_argument("level lies in the zero set of the drift");
  if (reps < 2) throw std::invalid_argument("net crossing check needs at least two replications");
  const double sgn = mu_u > 0.0 ? 1.0 : -1.0;

  struct Row {
    double net_disc;
    double rhs;
    double continuous;
    bool exclusive;
  };
  const auto rows = parallel_map(reps, threads, [&](std::size_t i) {
    Rng rng = make_stream(seed, i, Substream::pdmp);
    const HybridPath path = simulate_pdmp(spec, rng);
    const CrossingCounts c = count_crossings(path, level);
    const double below_end = path.values.back() < level ? 1.0 : 0.0;
    const double below_start = path.values.front() < level ? 1.0 : 0.0;
    const bool exclusive = sgn > 0.0 ? c.cont_down == 0 : c.cont_up == 0;
    return Row{static_cast<double>(c.disc_down - c.disc_up),
               sgn * static_cast<double>(c.continuous()) + below_end - below_start,
               static_cast<double>(c.continuous()), exclusive};
  });

  MomentAccumulator lhs;
  MomentAccumulator rhs;
  MomentAccumulator cont;
  bool exclusive = true;
  for (const Row& r : rows) {
    lhs.add(r.net_disc);
    rhs.add(r.rhs);
    cont.add(r.continuous);
    exclusive = exclusive && r.exclusive;
  }
  const MCEstimate l = lhs.estimate(seed);
  const MCEstimate rr = rhs.estimate(seed);
  const MCEstimate c = cont.estimate(seed);
  return {l.mean, rr.mean, combined_se(l, rr), reps, c.mean, c.se, exclusive};
}

}  // namespace crossings
