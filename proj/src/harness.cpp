#include "gfdyn/harness.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gfdyn/error.hpp"
#include "gfdyn/random.hpp"

namespace gfdyn {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(ErrorKind::io_error, "cannot create output directory " + dir.string());
}

void write_text(const std::string& text, const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
  os << text;
  if (!os) raise(ErrorKind::io_error, "failed writing " + path.string());
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }

}  // namespace

// ---------------------------------------------------------------- evolve

EvolveResult cmd_evolve(const ExperimentConfig& cfg, EvolveMode mode,
                        const std::optional<fs::path>& out_dir) {
  const PairPotential pot = config_potential(cfg);
  const ScaleParams params = config_scale(cfg);
  params.validate();
  const GeneratorKind kind = GeneratorKind::from_epsilon(cfg.epsilon);
  const CorrelationHierarchy u0 = exponential_hierarchy(config_initial_density(cfg), cfg.n_max);

  const double local_radius = step_radius(norm_bound_M(params, pot), params.alpha, params.alpha0);
  bool global = mode == EvolveMode::global;
  if (mode == EvolveMode::automatic) global = !(cfg.t_final < local_radius);

  EvolveResult result{.report = SolveReport{u0, 0, 0.0, local_radius, 0, {}}, .used_global = global};

  if (global) {
    GlobalOptions opts;
    opts.substep_fraction = cfg.substep_fraction;
    opts.m_max = cfg.m_max;
    opts.tol = cfg.tol;
    result.report = evolve_global(params, pot, u0, cfg.t_final, opts, kind);
  } else {
    const StepRecord start = make_step_record(0.0, result.report, params.z, params.alpha);
    result.report = solve_local(params, pot, kind, u0, cfg.t_final, cfg.m_max, cfg.tol);
    result.report.steps = {start};
    if (cfg.t_final > 0.0)
      result.report.steps.push_back(
          make_step_record(cfg.t_final, result.report, params.z, params.alpha));
  }

  for (const auto& rec : result.report.steps) {
    for (std::size_t n = 0; n < rec.order_max_abs.size(); ++n)
      result.diagnostics.add_row({cell(rec.time), cell(n), cell(rec.order_max_abs[n]),
                                  cell(rec.scale_norm), cell(rec.ruelle_margin)});
    result.steps.add_row({cell(rec.time), cell(rec.terms_used), cell(rec.tail_estimate),
                          cell(rec.ruelle_margin), cell(rec.scale_norm)});
  }
  std::ostringstream snap;
  write_snapshot(snap, result.report.solution);
  result.snapshot = snap.str();

  if (out_dir) {
    ensure_dir(*out_dir);
    write_csv(result.diagnostics, *out_dir / "evolve_diagnostics.csv");
    write_csv(result.steps, *out_dir / "evolve_steps.csv");
    write_text(result.snapshot, *out_dir / "evolve_snapshot.txt");
  }
  return result;
}

// ---------------------------------------------------------------- vlasov

VlasovRunResult cmd_vlasov(const ExperimentConfig& cfg, const std::optional<fs::path>& out_dir) {
  const PairPotential pot = config_potential(cfg);
  const GridField rho0 = config_initial_density(cfg);
  VlasovRunResult result{.run = integrate(rho0, config_vlasov(cfg), pot)};

  const GridField& rho = result.run.final_state;
  result.residual = stationary_residual(rho, cfg.z, pot);
  result.bound_ok = linf_bound_check(result.run.trajectory, rho0, cfg.z);
  if (pot.is_zero()) {
    const double decay = std::exp(-cfg.t_final);
    double err = 0.0;
    for (std::size_t x = 0; x < rho.size(); ++x)
      err = std::max(err, std::abs(rho[x] - (cfg.z + (rho0[x] - cfg.z) * decay)));
    result.closed_form_error = err;
  }

  for (const auto& sample : result.run.trajectory)
    for (std::size_t x = 0; x < sample.rho.size(); ++x)
      result.trajectory.add_row({cell(sample.t), cell(x), cell(sample.rho[x])});
  result.summary.add_row({cell(cfg.t_final), cell(result.residual),
                          result.bound_ok ? "pass" : "fail",
                          result.closed_form_error ? cell(*result.closed_form_error) : "na"});

  if (out_dir) {
    ensure_dir(*out_dir);
    write_csv(result.trajectory, *out_dir / "vlasov_trajectory.csv");
    write_csv(result.summary, *out_dir / "vlasov_summary.csv");
  }
  return result;
}

// ---------------------------------------------------------------- scaling study

double fit_log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    raise(ErrorKind::invalid_argument, "slope fit needs at least two paired points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      raise(ErrorKind::invalid_argument, "log-log fit needs positive values");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(xs.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) raise(ErrorKind::invalid_argument, "slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / denom;
}

double sampled_gf_distance(const CorrelationHierarchy& k1, const CorrelationHierarchy& k2,
                           double alpha, std::uint64_t seed, std::size_t samples) {
  require_same_shape(k1, k2);
  Rng rng(seed);
  double gap = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const GridField theta = random_field(k1.grid(), rng, -0.5, 0.5);
    const double diff = std::abs(evaluate_gf(k1, theta) - evaluate_gf(k2, theta));
    gap = std::max(gap, diff * std::exp(-field_l1_norm(theta) / alpha));
  }
  return gap;
}

ScalingStudyResult cmd_scaling_study(const ExperimentConfig& cfg,
                                     const std::vector<double>& epsilons,
                                     const std::optional<fs::path>& out_dir) {
  if (epsilons.empty()) raise(ErrorKind::invalid_argument, "scaling study needs at least one epsilon");
  for (double e : epsilons)
    if (!(e > 0.0)) raise(ErrorKind::invalid_argument, "scaling study epsilons must be positive");

  const PairPotential pot = config_potential(cfg);
  const ScaleParams params = config_scale(cfg);
  const CorrelationHierarchy u0 = exponential_hierarchy(config_initial_density(cfg), cfg.n_max);

  const auto limit =
      solve_local(params, pot, GeneratorKind::vlasov_limit(), u0, cfg.t_final, cfg.m_max, cfg.tol);

  ScalingStudyResult result;
  result.epsilons = epsilons;
  for (double eps : epsilons) {
    const auto rescaled =
        solve_local(params, pot, GeneratorKind::rescaled(eps), u0, cfg.t_final, cfg.m_max, cfg.tol);
    const double gap = sampled_gf_distance(rescaled.solution, limit.solution, params.alpha, cfg.seed);
    result.gaps.push_back(gap);
    result.table.add_row({cell(eps), cell(gap)});
  }

  bool fittable = epsilons.size() >= 2;
  for (double g : result.gaps) fittable = fittable && g > 0.0;
  result.fitted_order = fittable ? fit_log_log_slope(result.epsilons, result.gaps)
                                 : std::numeric_limits<double>::quiet_NaN();
  result.fit.add_row({cell(result.fitted_order), cell(epsilons.size())});

  if (out_dir) {
    ensure_dir(*out_dir);
    write_csv(result.table, *out_dir / "scaling_study.csv");
    write_csv(result.fit, *out_dir / "scaling_fit.csv");
  }
  return result;
}

// ---------------------------------------------------------------- chaos check

ChaosResult cmd_chaos_check(const ExperimentConfig& cfg, const std::optional<fs::path>& out_dir) {
  if (cfg.n_max < 4) raise(ErrorKind::invalid_argument, "chaos check needs truncation.n_max >= 4");
  const PairPotential pot = config_potential(cfg);
  const GridField rho0 = config_initial_density(cfg);

  const VlasovResult kinetic = integrate(rho0, config_vlasov(cfg), pot);
  ChaosResult result;
  for (const auto& sample : kinetic.trajectory)
    result.max_mean_field = std::max(result.max_mean_field, field_linf_norm(convolve(pot, sample.rho)));
  if (result.max_mean_field > kChaosMeanFieldLimit) {
    std::ostringstream msg;
    msg << "chaos check needs ||phi * rho||_inf <= " << kChaosMeanFieldLimit << ", got "
        << result.max_mean_field;
    raise(ErrorKind::invalid_argument, msg.str());
  }

  ScaleParams params = config_scale(cfg);
  params.epsilon = 0.0;
  const auto evolved =
      evolve_stepped(params, pot, GeneratorKind::vlasov_limit(), exponential_hierarchy(rho0, cfg.n_max),
                     cfg.t_final, cfg.substep_fraction, cfg.m_max, cfg.tol);

  const GridField& rho = kinetic.final_state;
  const auto k1 = evolved.solution.tensor(1);
  const auto k2 = evolved.solution.tensor(2);
  const std::size_t n = rho.size();
  for (std::size_t x = 0; x < n; ++x) {
    result.dev1 = std::max(result.dev1, std::abs(k1[x] - rho[x]));
    for (std::size_t y = 0; y < n; ++y)
      result.dev2 = std::max(result.dev2, std::abs(k2[x * n + y] - rho[x] * rho[y]));
  }
  result.pass = result.dev1 <= kChaosTolerance && result.dev2 <= kChaosTolerance;
  result.table.add_row({cell(cfg.t_final), cell(result.dev1), cell(result.dev2),
                        cell(result.max_mean_field), result.pass ? "pass" : "fail"});

  if (out_dir) {
    ensure_dir(*out_dir);
    write_csv(result.table, *out_dir / "chaos_check.csv");
  }
  return result;
}

// ---------------------------------------------------------------- inequality suites

std::size_t BoundsReport::total_violations() const {
  std::size_t v = 0;
  for (const auto& s : suites) v += s.violations;
  return v;
}

namespace {

void tally(SuiteReport& suite, double lhs, double rhs) {
  ++suite.checks;
  if (!(lhs <= rhs)) ++suite.violations;
  const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  suite.max_ratio = std::max(suite.max_ratio, ratio);
}

}  // namespace

BoundsReport cmd_verify_bounds(const ExperimentConfig& cfg, std::size_t n_cases,
                               const std::optional<fs::path>& out_dir) {
  if (n_cases < 1) raise(ErrorKind::invalid_argument, "verify-bounds needs at least one case");
  const Grid grid = config_grid(cfg);
  const PairPotential pot = config_potential(cfg);
  const ScaleParams params = config_scale(cfg);
  params.validate();
  const double M = norm_bound_M(params, pot);

  SuiteReport cauchy{"cauchy_estimate"}, death{"death_bound"}, birth{"birth_bound"},
      generator{"generator_bound"}, limit_gap{"vlasov_gap_bound"};

  Rng rng(cfg.seed);
  const double theta_scales[] = {0.1, 0.5, 2.0};
  for (std::size_t c = 0; c < n_cases; ++c) {
    const CorrelationHierarchy k = random_hierarchy(grid, cfg.n_max, rng, cfg.z);
    const double s = theta_scales[rng.next() % 3];
    const GridField theta = random_field(grid, rng, -s, s);
    const double theta_l1 = field_l1_norm(theta);

    const double lo = params.alpha, hi = params.alpha0;
    const double a1 = lo + 0.9 * (hi - lo) * rng.unit();
    const double a2 = a1 + (hi - a1) * (0.1 + 0.9 * rng.unit());
    const double eps = rng.uniform(0.01, 1.0);
    const double norm2 = scale_norm(k, a2);
    const double weight = std::exp(theta_l1 / a1);

    for (std::size_t n = 1; n <= k.n_max(); ++n) {
      for (double r : {0.5, 1.0, 2.0}) {
        const double sup = gf_upper_bound(k, r);
        const double rhs = n == 1 ? sup / r
                                  : std::tgamma(static_cast<double>(n) + 1.0) *
                                        std::pow(std::exp(1.0) / r, static_cast<double>(n)) * sup;
        tally(cauchy, tensor_max_abs(k, n), rhs);
      }
    }

    tally(death, std::abs(evaluate_death_gf(k, theta)), a1 / (a2 - a1) * norm2 * weight);

    const GeneratorKind kinds[] = {GeneratorKind::glauber(), GeneratorKind::rescaled(eps),
                                   GeneratorKind::vlasov_limit()};
    for (const auto& kind : kinds) {
      const ShiftBounds sb = shift_bounds(pot, kind);
      const double l2 = a2 * a1 / (a2 - sb.c0 * a1) * std::exp(sb.c1 / a2 - 1.0);
      tally(birth, std::abs(evaluate_birth_gf(k, theta, pot, kind)), l2 * norm2 * weight);
      tally(generator, std::abs(evaluate_generator_gf_full(k, theta, params, pot, kind)),
            M / (a2 - a1) * norm2 * weight);
    }

    const double gap = std::abs(
        evaluate_generator_gf_full(k, theta, params, pot, GeneratorKind::rescaled(eps)) -
        evaluate_generator_gf_full(k, theta, params, pot, GeneratorKind::vlasov_limit()));
    tally(limit_gap, gap, vlasov_gap_bound(eps, params, pot, a1, a2) * norm2 * weight);
  }

  BoundsReport report;
  report.suites = {cauchy, death, birth, generator, limit_gap};
  for (const auto& s : report.suites)
    report.table.add_row({s.name, cell(s.checks), cell(s.violations), cell(s.max_ratio)});
  if (out_dir) {
    ensure_dir(*out_dir);
    write_csv(report.table, *out_dir / "verify_bounds.csv");
  }
  return report;
}

}  // namespace gfdyn
