#include "crossings/jump_processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crossings/numeric.hpp"

namespace crossings {

double JumpPath::value_at(double t) const {
  // Right-continuous: the last jump at or before t determines the value.
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return initial;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument(std::string(what) + " must be finite and > 0");
}

void require_rho(double rho) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("autoregressive coefficient rho must satisfy |rho| < 1");
}

}  // namespace

std::vector<double> sample_poisson_times(double lambda, double horizon, Rng& rng) {
  require_positive(lambda, "jump intensity lambda");
  require_positive(horizon, "horizon T");
  std::exponential_distribution<double> gap(lambda);
  std::vector<double> times;
  for (double t = gap(rng); t <= horizon; t += gap(rng)) {
    if (times.size() >= kMaxJumpsPerReplication) throw ExplosionError("Poisson sampler exceeded the jump guard");
    times.push_back(t);
  }
  return times;
}

JumpPath sample_poisson_ar(double lambda, double rho, double horizon, Rng& rng) {
  require_rho(rho);
  JumpPath path;
  path.horizon = horizon;
  path.times = sample_poisson_times(lambda, horizon, rng);
  std::normal_distribution<double> half_var(0.0, std::sqrt(0.5));
  const double innovation = std::sqrt((1.0 - rho) * (1.0 + rho));
  double a = half_var(rng);
  path.initial = a;
  path.values.reserve(path.times.size());
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    a = rho * a + innovation * half_var(rng);
    path.values.push_back(a);
  }
  return path;
}

JumpPath sample_cpp(double lambda, double horizon, Rng& rng) {
  JumpPath path;
  path.horizon = horizon;
  path.times = sample_poisson_times(lambda, horizon, rng);
  std::normal_distribution<double> mark(0.0, 1.0);
  double sum = 0.0;
  path.values.reserve(path.times.size());
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    sum += mark(rng);
    path.values.push_back(sum);
  }
  return path;
}

JumpPath sample_kernel_mpp(const KernelMPP& kernel, double horizon, Rng& rng) {
  require_positive(horizon, "horizon T");
  if (!kernel.initial || !kernel.next_gap || !kernel.next_increment) {
    throw std::invalid_argument("kernel MPP '" + kernel.name + "' is missing a kernel");
  }
  std::vector<double> hist_times{0.0};
  std::vector<double> hist_values{kernel.initial(rng)};
  JumpPath path;
  path.horizon = horizon;
  path.initial = hist_values.front();
  double now = 0.0;
  for (;;) {
    const double gap = kernel.next_gap(MppHistory{hist_times, hist_values}, rng);
    if (std::isnan(gap) || gap <= 0.0) throw std::domain_error("kernel MPP '" + kernel.name + "' drew a non-positive gap");
    if (std::isinf(gap) || now + gap > horizon) break;
    if (path.times.size() >= kMaxJumpsPerReplication) {
      throw ExplosionError("kernel MPP '" + kernel.name + "' exceeded the jump guard");
    }
    now += gap;
    const double increment = kernel.next_increment(MppHistory{hist_times, hist_values}, now, rng);
    const double value = hist_values.back() + increment;
    hist_times.push_back(now);
    hist_values.push_back(value);
    path.times.push_back(now);
    path.values.push_back(value);
  }
  return path;
}

KernelMPP KernelMPP::compound_poisson(double lambda) {
  require_positive(lambda, "jump intensity lambda");
  KernelMPP k;
  k.name = "cpp";
  k.initial = [](Rng&) { return 0.0; };
  k.next_gap = [lambda](const MppHistory&, Rng& rng) { return std::exponential_distribution<double>(lambda)(rng); };
  k.next_increment = [](const MppHistory&, double, Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); };
  return k;
}

KernelMPP KernelMPP::poisson_autoregressive(double lambda, double rho) {
  require_positive(lambda, "jump intensity lambda");
  require_rho(rho);
  KernelMPP k;
  k.name = "poisson_ar";
  k.initial = [](Rng& rng) { return std::normal_distribution<double>(0.0, std::sqrt(0.5))(rng); };
  k.next_gap = [lambda](const MppHistory&, Rng& rng) { return std::exponential_distribution<double>(lambda)(rng); };
  const double sd = std::sqrt(0.5 * (1.0 - rho) * (1.0 + rho));
  k.next_increment = [rho, sd](const MppHistory& h, double, Rng& rng) {
    return std::normal_distribution<double>((rho - 1.0) * h.values.back(), sd)(rng);
  };
  return k;
}

KernelMPP KernelMPP::frozen() {
  KernelMPP k;
  k.name = "frozen";
  k.initial = [](Rng&) { return 0.0; };
  k.next_gap = [](const MppHistory&, Rng&) { return std::numeric_limits<double>::infinity(); };
  k.next_increment = [](const MppHistory&, double, Rng&) { return 0.0; };
  return k;
}

double cpp_crossing_probability(double x, double level, Direction direction) {
  double g = 0.0;
  if (direction != Direction::down && x < level) g += std_normal_sf(level - x);
  if (direction != Direction::up && x > level) g += std_normal_cdf(level - x);
  return g;
}

double cpp_disc_rate_integral(std::span<const double> background, double step, double level, double lambda,
                              Direction direction) {
  if (background.empty()) throw std::invalid_argument("cpp_disc_rate_integral: empty grid");
  if (!(step > 0.0)) throw std::invalid_argument("cpp_disc_rate_integral: step must be > 0");
  if (background.size() == 1) return 0.0;
  double sum = 0.5 * (cpp_crossing_probability(background.front(), level, direction) +
                      cpp_crossing_probability(background.back(), level, direction));
  for (std::size_t i = 1; i + 1 < background.size(); ++i) sum += cpp_crossing_probability(background[i], level, direction);
  return lambda * step * sum;
}

}  // namespace crossings
