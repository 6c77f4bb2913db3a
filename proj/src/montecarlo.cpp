#include "crossings/montecarlo.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace crossings {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

JumpPath constant_path(double horizon, double value) {
  JumpPath p;
  p.horizon = horizon;
  p.initial = value;
  return p;
}

KernelMPP builtin_kernel(const KernelJumps& k) {
  if (k.kernel == "cpp") return KernelMPP::compound_poisson(k.lambda);
  if (k.kernel == "poisson_ar") return KernelMPP::poisson_autoregressive(k.lambda, k.rho);
  if (k.kernel == "frozen") return KernelMPP::frozen();
  throw std::invalid_argument("unknown kernel '" + k.kernel + "' (expected cpp, poisson_ar or frozen)");
}

JumpPath sample_jumps(const JumpSpec& jumps, double horizon, Rng& rng) {
  return std::visit(Overloaded{
                        [&](const NoJumps&) { return constant_path(horizon, 0.0); },
                        [&](const PoissonArJumps& j) {
                          if (j.lambda == 0.0) {
                            return constant_path(horizon, std::normal_distribution<double>(0.0, std::sqrt(0.5))(rng));
                          }
                          return sample_poisson_ar(j.lambda, j.rho, horizon, rng);
                        },
                        [&](const CppJumps& j) {
                          if (j.lambda == 0.0) return constant_path(horizon, 0.0);
                          return sample_cpp(j.lambda, horizon, rng);
                        },
                        [&](const KernelJumps& j) { return sample_kernel_mpp(builtin_kernel(j), horizon, rng); },
                    },
                    jumps);
}

struct PreparedGrid {
  std::optional<HarmonicGrid> grid;
};

HybridPath simulate_with(const ExperimentSpec& spec, const PreparedGrid& prepared, std::size_t index,
                         std::vector<double>& scratch) {
  if (const auto* pdmp = std::get_if<PdmpSpec>(&spec.process)) {
    Rng rng = make_stream(spec.seed, index, Substream::pdmp);
    return simulate_pdmp(*pdmp, rng);
  }
  const auto& smooth = std::get<SmoothPlusJump>(spec.process);
  Rng zrng = make_stream(spec.seed, index, Substream::gaussian);
  Rng jrng = make_stream(spec.seed, index, Substream::jumps);
  const HarmonicRealization z(smooth.model, zrng);
  scratch.resize(prepared.grid->size());
  prepared.grid->values(z, scratch);
  const JumpPath j = sample_jumps(smooth.jumps, spec.horizon, jrng);
  return combine_paths(scratch, spec.step, j, [&z](double t) { return z.value(t); });
}

PreparedGrid prepare(const ExperimentSpec& spec) {
  PreparedGrid p;
  if (const auto* smooth = std::get_if<SmoothPlusJump>(&spec.process)) {
    p.grid.emplace(smooth->model, spec.horizon, spec.step);
  }
  return p;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (levels.empty()) throw std::invalid_argument("experiment needs at least one level");
  for (const double u : levels) {
    if (!std::isfinite(u)) throw std::invalid_argument("levels must be finite");
  }
  if (reps < 100) throw std::invalid_argument("replication count must be >= 100");
  if (const auto* pdmp = std::get_if<PdmpSpec>(&process)) {
    pdmp->validate();
    if (pdmp->horizon != horizon) throw std::invalid_argument("pdmp horizon must equal the experiment horizon");
    return;
  }
  (void)grid_intervals(horizon, step);
  const auto& smooth = std::get<SmoothPlusJump>(process);
  std::visit(Overloaded{
                 [](const NoJumps&) {},
                 [](const PoissonArJumps& j) {
                   if (!(j.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
                   if (!(std::abs(j.rho) < 1.0)) throw std::invalid_argument("rho must satisfy |rho| < 1");
                 },
                 [](const CppJumps& j) {
                   if (!(j.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
                 },
                 [](const KernelJumps& j) { (void)builtin_kernel(j); },
             },
             smooth.jumps);
}

double jump_intensity(const ProcessSpec& process) {
  if (const auto* pdmp = std::get_if<PdmpSpec>(&process)) return pdmp->lambda;
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [](const PoissonArJumps& j) { return j.lambda; },
                        [](const CppJumps& j) { return j.lambda; },
                        [](const KernelJumps& j) { return j.kernel == "frozen" ? 0.0 : j.lambda; },
                    },
                    std::get<SmoothPlusJump>(process).jumps);
}

bool has_gaussian_cpp_compensator(const ProcessSpec& process) {
  const auto* smooth = std::get_if<SmoothPlusJump>(&process);
  if (smooth == nullptr) return false;
  if (std::holds_alternative<CppJumps>(smooth->jumps)) return true;
  const auto* k = std::get_if<KernelJumps>(&smooth->jumps);
  return k != nullptr && k->kernel == "cpp";
}

HybridPath simulate_replication(const ExperimentSpec& spec, std::size_t index) {
  spec.validate();
  const PreparedGrid prepared = prepare(spec);
  std::vector<double> scratch;
  return simulate_with(spec, prepared, index, scratch);
}

ReplicationResult run_replications(const ExperimentSpec& spec) {
  spec.validate();
  const PreparedGrid prepared = prepare(spec);
  const bool compensate = has_gaussian_cpp_compensator(spec.process);
  const double lambda = jump_intensity(spec.process);

  const auto outcomes = parallel_map(spec.reps, spec.threads, [&](std::size_t i) -> std::optional<ReplicationRecord> {
    thread_local std::vector<double> scratch;
    HybridPath path;
    try {
      path = simulate_with(spec, prepared, i, scratch);
    } catch (const ExplosionError&) {
      return std::nullopt;
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    ReplicationRecord rec;
    rec.x0 = path.values.front();
    rec.max = path_max(path);
    rec.counts.reserve(spec.levels.size());
    for (const double u : spec.levels) {
      rec.counts.push_back(count_crossings(path, u));
      if (compensate) rec.compensator_up.push_back(cpp_disc_rate_integral(path, u, lambda, Direction::up));
    }
    return rec;
  });

  ReplicationResult result;
  result.seed = spec.seed;
  result.requested = spec.reps;
  result.records.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o) {
      result.records.push_back(*o);
    } else {
      ++result.failed;
    }
  }
  if (static_cast<double>(result.failed) > 1e-3 * static_cast<double>(spec.reps)) {
    std::ostringstream msg;
    msg << result.failed << " of " << spec.reps << " replications failed (limit 0.1%)";
    throw ExperimentError(msg.str());
  }

  for (std::size_t l = 0; l < spec.levels.size(); ++l) {
    const double u = spec.levels[l];
    MomentAccumulator cu, cd, du, dd, up, fact2, exceed, x0a, x0b, upx0, lower, comp;
    LevelEstimates est;
    est.level = u;
    for (const ReplicationRecord& rec : result.records) {
      const CrossingCounts& c = rec.counts[l];
      const auto big_u = static_cast<double>(c.up());
      const double above = rec.x0 > u ? 1.0 : 0.0;
      const double below = rec.x0 < u ? 1.0 : 0.0;
      const double crossed = c.up() >= 1 ? 1.0 : 0.0;
      const double exceeded = rec.max > u ? 1.0 : 0.0;
      cu.add(static_cast<double>(c.cont_up));
      cd.add(static_cast<double>(c.cont_down));
      du.add(static_cast<double>(c.disc_up));
      dd.add(static_cast<double>(c.disc_down));
      up.add(big_u);
      fact2.add(big_u * (big_u - 1.0));
      exceed.add(exceeded);
      x0a.add(above);
      x0b.add(below * crossed);
      upx0.add(crossed * above);
      lower.add(above + big_u - 0.5 * big_u * (big_u - 1.0) - crossed * above);
      if (compensate) comp.add(rec.compensator_up[l]);
      if (exceeded != above + below * crossed) ++est.decomposition_mismatches;
    }
    const std::uint64_t s = spec.seed;
    est.cont_up = cu.estimate(s);
    est.cont_down = cd.estimate(s);
    est.disc_up = du.estimate(s);
    est.disc_down = dd.estimate(s);
    est.up_total = up.estimate(s);
    est.up_factorial2 = fact2.estimate(s);
    est.exceed = exceed.estimate(s);
    est.x0_above = x0a.estimate(s);
    est.x0_below_crossed = x0b.estimate(s);
    est.up_and_x0_above = upx0.estimate(s);
    est.lower_statistic = lower.estimate(s);
    if (compensate) est.compensator_up = comp.estimate(s);
    result.levels.push_back(est);
  }
  return result;
}

MCEstimate estimate_factorial_moment2(std::span<const std::int64_t> counts, std::uint64_t seed) {
  MomentAccumulator acc;
  for (const std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("crossing counts must be >= 0");
    const auto x = static_cast<double>(c);
    acc.add(x * (x - 1.0));
  }
  return acc.estimate(seed);
}

MaxTailEstimate estimate_max_tail(const ReplicationResult& result, std::size_t level_index) {
  const LevelEstimates& l = result.levels.at(level_index);
  return {l.exceed, l.x0_above, l.x0_below_crossed, l.decomposition_mismatches};
}

MaxTailEstimate estimate_max_tail(const ExperimentSpec& spec, double level) {
  ExperimentSpec single = spec;
  single.levels = {level};
  return estimate_max_tail(run_replications(single), 0);
}

TailBounds assemble_tail_bounds(double analytic_upper, double mean_up, double mean_up_factorial2,
                                double prob_up_and_x0_above, double prob_x0_above) {
  return {prob_x0_above + mean_up - 0.5 * mean_up_factorial2 - prob_up_and_x0_above, prob_x0_above + mean_up,
          analytic_upper};
}

}  // namespace crossings
