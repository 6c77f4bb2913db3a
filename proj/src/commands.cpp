#include "crossings/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "crossings/rice.hpp"

namespace crossings {

namespace {

struct AnalyticLevel {
  double continuous = 0.0;
  std::optional<double> continuous_se;
  std::optional<double> discontinuous;
  std::optional<double> tail_upper;
};

enum class Family { gaussian, poisson_ar, cpp, pdmp };

struct ResolvedProcess {
  Family family;
  double lambda = 0.0;
  double rho = 0.0;
  double variance = 1.0;  ///< Var X(t) for the Gaussian family
};

ResolvedProcess resolve(const Config& cfg) {
  if (cfg.kind == ProcessKind::pdmp) return {Family::pdmp};
  const auto& smooth = std::get<SmoothPlusJump>(cfg.experiment.process);
  const double gamma0 = smooth.model.variance();
  double lambda = jump_intensity(cfg.experiment.process);
  double rho = 0.0;
  Family family = Family::gaussian;
  if (const auto* p = std::get_if<PoissonArJumps>(&smooth.jumps)) {
    family = Family::poisson_ar;
    rho = p->rho;
  } else if (std::holds_alternative<CppJumps>(smooth.jumps)) {
    family = Family::cpp;
  } else if (const auto* k = std::get_if<KernelJumps>(&smooth.jumps)) {
    if (k->kernel == "poisson_ar") {
      family = Family::poisson_ar;
      rho = k->rho;
    } else if (k->kernel == "cpp") {
      family = Family::cpp;
    }
  }
  // Without jumps: Poisson-AR leaves the constant A_0 ~ N(0, 1/2), so X(t) ~ N(0, 1);
  // a CPP or the frozen kernel leaves X = Z.
  if (family != Family::gaussian && lambda == 0.0) {
    return {Family::gaussian, 0.0, 0.0, family == Family::poisson_ar ? gamma0 + 0.5 : gamma0};
  }
  return {family, lambda, rho, gamma0};
}

AnalyticLevel analytic_level(const Config& cfg, const ResolvedProcess& rp, double u) {
  const ExperimentSpec& e = cfg.experiment;
  AnalyticLevel out;
  if (rp.family == Family::pdmp) {
    const auto& spec = std::get<PdmpSpec>(e.process);
    const double mu = spec.drift(u);
    const MCEstimate occ = occupation_density_integral(spec, u, cfg.occupation_delta, e.reps, e.seed, e.threads);
    out.continuous = bl_mean_continuous(mu, occ.mean);
    out.continuous_se = std::abs(mu) * occ.se;
    return out;
  }
  const double lambda2 = cfg.model()->second_spectral_moment();
  switch (rp.family) {
    case Family::gaussian: {
      out.continuous = rice_const_var_continuous(lambda2, gauss_density_var(u, rp.variance), e.horizon, Direction::up);
      out.discontinuous = 0.0;
      out.tail_upper = std::min(1.0, std_normal_sf(u / std::sqrt(rp.variance)) + out.continuous);
      break;
    }
    case Family::poisson_ar: {
      const PoissonArParams p{lambda2, rp.lambda, rp.rho, e.horizon};
      const MeanCrossings m = poisson_ar_upcrossings(p, u, cfg.quadrature);
      out.continuous = m.continuous;
      out.discontinuous = m.discontinuous;
      out.tail_upper = max_tail_upper_bound(p, u, cfg.quadrature);
      break;
    }
    case Family::cpp: {
      const CppParams c{lambda2, rp.lambda, e.horizon, cfg.series_tol};
      const MeanCrossings m = cpp_upcrossings(c, u, cfg.quadrature);
      out.continuous = m.continuous;
      out.discontinuous = m.discontinuous;
      // J(0) = 0, so X(0) = Z(0) ~ N(0, 1).
      out.tail_upper = std::min(1.0, std_normal_sf(u) + m.total);
      break;
    }
    case Family::pdmp: break;
  }
  return out;
}

RiceReport header(const Config& cfg, const char* command) {
  RiceReport r;
  r.name = cfg.name;
  r.command = command;
  r.process = std::string(to_string(cfg.kind));
  if (cfg.kind == ProcessKind::kernel) r.process += ":" + cfg.kernel;
  return r;
}

void fill_analytic(const Config& cfg, RiceReport& report) {
  const ResolvedProcess rp = resolve(cfg);
  report.rows.resize(cfg.experiment.levels.size());
  for (std::size_t l = 0; l < cfg.experiment.levels.size(); ++l) {
    ReportRow& row = report.rows[l];
    row.level = cfg.experiment.levels[l];
    const AnalyticLevel a = analytic_level(cfg, rp, row.level);
    row.analytic_continuous = a.continuous;
    row.analytic_continuous_se = a.continuous_se;
    row.analytic_discontinuous = a.discontinuous;
    if (a.discontinuous) row.analytic_total = a.continuous + *a.discontinuous;
    row.tail_analytic_upper = a.tail_upper;
  }
}

ReplicationResult fill_simulated(const Config& cfg, RiceReport& report, bool tail_columns) {
  ReplicationResult result = run_replications(cfg.experiment);
  report.seed = cfg.experiment.seed;
  report.reps = result.requested;
  report.failed = result.failed;
  report.rows.resize(cfg.experiment.levels.size());
  for (std::size_t l = 0; l < result.levels.size(); ++l) {
    const LevelEstimates& est = result.levels[l];
    ReportRow& row = report.rows[l];
    row.level = est.level;
    row.cont_up = est.cont_up;
    row.cont_down = est.cont_down;
    row.disc_up = est.disc_up;
    row.disc_down = est.disc_down;
    row.compensator_up = est.compensator_up;
    row.exceed = est.exceed;
    MomentAccumulator cont_total;
    MomentAccumulator upper;
    for (const ReplicationRecord& rec : result.records) {
      const CrossingCounts& c = rec.counts[l];
      cont_total.add(static_cast<double>(c.continuous()));
      upper.add((rec.x0 > est.level ? 1.0 : 0.0) + static_cast<double>(c.up()));
    }
    if (cfg.kind == ProcessKind::pdmp) row.cont_total = cont_total.estimate(result.seed);
    if (tail_columns) {
      row.tail_lower = est.lower_statistic;
      row.tail_upper = upper.estimate(result.seed);
    }
  }
  return result;
}

bool within(double a, double b, double se) { return std::abs(a - b) <= 3.0 * se; }

void flag_sandwich(RiceReport& report) {
  for (ReportRow& row : report.rows) {
    if (!row.exceed || !row.tail_lower || !row.tail_upper) continue;
    const double p = row.exceed->mean;
    const bool lower_ok = row.tail_lower->mean - 3.0 * combined_se(*row.tail_lower, *row.exceed) <= p;
    const double upper = row.tail_analytic_upper.value_or(row.tail_upper->mean);
    const double upper_se = row.tail_analytic_upper ? row.exceed->se : combined_se(*row.tail_upper, *row.exceed);
    row.sandwich = lower_ok && p <= upper + 3.0 * upper_se;
  }
}

}  // namespace

RiceReport cmd_analytic(const Config& config) {
  RiceReport report = header(config, "analytic");
  fill_analytic(config, report);
  if (config.kind == ProcessKind::pdmp) {
    report.seed = config.experiment.seed;
    report.reps = config.experiment.reps;
    report.message = "continuous column is |mu(u)| times the occupation-time estimate of int p_X(t)(u) dt";
  }
  return report;
}

RiceReport cmd_simulate(const Config& config) {
  RiceReport report = header(config, "simulate");
  (void)fill_simulated(config, report, false);
  return report;
}

RiceReport cmd_compare(const Config& config) {
  RiceReport report = header(config, "compare");
  fill_analytic(config, report);
  (void)fill_simulated(config, report, true);
  const bool pdmp = config.kind == ProcessKind::pdmp;
  for (ReportRow& row : report.rows) {
    bool ok = true;
    if (pdmp) {
      const auto& spec = std::get<PdmpSpec>(config.experiment.process);
      const NetCrossingCheck net =
          net_jump_crossing_check(spec, row.level, config.experiment.reps, config.experiment.seed, config.experiment.threads);
      row.net_lhs = net.lhs;
      row.net_rhs = net.rhs;
      row.net_se = net.combined_se;
      const double se = std::hypot(row.analytic_continuous_se.value_or(0.0), row.cont_total->se);
      ok = within(*row.analytic_continuous, row.cont_total->mean, se) && within(net.lhs, net.rhs, net.combined_se);
    } else {
      ok = within(*row.analytic_continuous, row.cont_up->mean, row.cont_up->se) &&
           within(*row.analytic_discontinuous, row.disc_up->mean, row.disc_up->se);
      if (row.compensator_up) {
        ok = ok && within(row.compensator_up->mean, row.disc_up->mean, combined_se(*row.compensator_up, *row.disc_up));
      }
    }
    row.agreement = ok;
  }
  flag_sandwich(report);
  return report;
}

RiceReport cmd_tail(const Config& config) {
  RiceReport report = header(config, "tail");
  fill_analytic(config, report);
  (void)fill_simulated(config, report, true);
  for (ReportRow& row : report.rows) {
    // Keep the tail columns only.
    ReportRow tail;
    tail.level = row.level;
    tail.exceed = row.exceed;
    tail.tail_lower = row.tail_lower;
    tail.tail_upper = row.tail_upper;
    tail.tail_analytic_upper = row.tail_analytic_upper;
    row = tail;
  }
  flag_sandwich(report);
  return report;
}

RiceReport cmd_validate(const Config& config) {
  RiceReport report = header(config, "validate");
  const SpectralModel* model = config.model();
  if (model == nullptr) {
    report.diagnostics_passed = true;
    report.message = "pdmp: no spectral model; drift, marks, initial law and levels passed validation";
    return report;
  }
  const ModelDiagnostics d = validate_model(*model, config.experiment.horizon);
  report.diagnostics_passed = d.passed;
  report.message = d.message;
  return report;
}

namespace {

std::optional<unsigned> parse_threads_env(std::ostream& err) {
  const char* env = std::getenv("CROSSINGS_LAB_THREADS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  unsigned value = 0;
  const std::string_view s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    err << "error: CROSSINGS_LAB_THREADS must be a nonnegative integer, got '" << s << "'\n";
    return std::nullopt;
  }
  return value;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Level crossings of smooth-plus-jump processes: Rice formulas vs Monte Carlo", "crossings_lab"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<unsigned> threads;

  const std::vector<std::string> names = {"analytic", "simulate", "compare", "tail", "validate"};
  const std::vector<std::string> help = {"closed-form mean crossings and tail bound",
                                         "Monte Carlo crossing counts",
                                         "analytic vs Monte Carlo with agreement flags",
                                         "maximum-tail sandwich",
                                         "spectral model diagnostics"};
  for (std::size_t k = 0; k < names.size(); ++k) {
    CLI::App* sub = app.add_subcommand(names[k], help[k]);
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--reps", reps, "replication count override");
    sub->add_option("--threads", threads, "worker threads, 0 = hardware concurrency");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::optional<Config> loaded;
  try {
    loaded.emplace(load_config(config_path));
    Config& cfg = *loaded;
    if (seed) cfg.experiment.seed = *seed;
    if (reps) {
      if (*reps < 100) throw ConfigError("--reps", "must be >= 100");
      cfg.experiment.reps = *reps;
    }
    if (!threads) {
      if (std::getenv("CROSSINGS_LAB_THREADS") != nullptr) {
        threads = parse_threads_env(err);
        if (!threads) return exit_usage;
      }
    }
    cfg.experiment.threads = threads.value_or(0);
    if (out_dir) cfg.output_dir = *out_dir;
  } catch (const ConfigError& e) {
    err << "config error in " << config_path << ": " << e.what() << '\n';
    return exit_usage;
  }

  Config& cfg = *loaded;
  RiceReport report;
  try {
    if (command == "analytic") {
      report = cmd_analytic(cfg);
    } else if (command == "simulate") {
      report = cmd_simulate(cfg);
    } else if (command == "compare") {
      report = cmd_compare(cfg);
    } else if (command == "tail") {
      report = cmd_tail(cfg);
    } else {
      report = cmd_validate(cfg);
    }
    write_report(report, cfg.output_dir);
  } catch (const std::exception& e) {
    err << command << " failed: " << e.what() << '\n';
    return exit_runtime;
  }
  out << to_table(report);
  out << "reports written to " << cfg.output_dir.string() << '\n';

  if (command == "compare" && !report.all_agree()) return exit_disagreement;
  if (command == "tail" && !report.all_sandwiched()) return exit_disagreement;
  if (command == "validate" && !report.diagnostics_passed.value_or(true)) return exit_disagreement;
  return exit_ok;
}

}  // namespace crossings
