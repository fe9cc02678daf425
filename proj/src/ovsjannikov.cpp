#include "gfdyn/ovsjannikov.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "gfdyn/error.hpp"

namespace gfdyn {

double step_radius(double M, double alpha, double alpha0) {
  if (!(M > 0.0)) raise(ErrorKind::invalid_argument, "norm bound M must be positive");
  if (!(alpha <= alpha0)) raise(ErrorKind::invalid_argument, "need alpha <= alpha0");
  return (alpha0 - alpha) / (std::exp(1.0) * M);
}

SolveReport taylor_evolve(const LinearOperator& apply, const CorrelationHierarchy& u0, double t,
                          const TaylorOptions& opts) {
  if (!(t >= 0.0) || !std::isfinite(t)) raise(ErrorKind::invalid_argument, "time must be >= 0");
  SolveReport report{u0, 0, 0.0, std::numeric_limits<double>::infinity(), 0, {}};
  if (t == 0.0) return report;

  CorrelationHierarchy term = u0;
  for (std::size_t m = 1; m <= opts.m_max; ++m) {
    term = apply(term);
    const double w = t / static_cast<double>(m);
    for (std::size_t n = 0; n <= term.n_max(); ++n)
      for (double& v : term.tensor(n)) v *= w;
    report.solution = axpy(1.0, term, report.solution);
    report.tail_estimate = scale_norm(term, opts.alpha);
    report.terms_used = m;
    if (!std::isfinite(report.tail_estimate))
      raise(ErrorKind::nonfinite_state, "Taylor series produced non-finite terms");
    if (report.tail_estimate < opts.tol) return report;
  }
  std::ostringstream msg;
  msg << "Taylor series did not reach tol " << opts.tol << " within " << opts.m_max
      << " terms (last term norm " << report.tail_estimate << ")";
  raise(ErrorKind::no_convergence, msg.str());
}

SolveReport solve_local(const ScaleParams& params, const PairPotential& pot, GeneratorKind kind,
                        const CorrelationHierarchy& u0, double t, std::size_t m_max, double tol) {
  params.validate();
  const double radius = step_radius(norm_bound_M(params, pot), params.alpha, params.alpha0);
  if (!(t >= 0.0)) raise(ErrorKind::invalid_argument, "time must be >= 0");
  if (t >= radius) {
    std::ostringstream msg;
    msg << "t = " << t << " is outside the guaranteed interval [0, " << radius << ")";
    raise(ErrorKind::radius_exceeded, msg.str());
  }
  auto apply = [&](const CorrelationHierarchy& k) { return apply_generator(k, params, pot, kind); };
  SolveReport report = taylor_evolve(apply, u0, t, TaylorOptions{m_max, tol, params.alpha});
  report.radius = radius;
  return report;
}

StepRecord make_step_record(double time, const SolveReport& r, double z, double alpha) {
  StepRecord rec{time, r.terms_used, r.tail_estimate, ruelle_margin(r.solution, z),
                 scale_norm(r.solution, alpha), {}};
  for (std::size_t n = 0; n <= r.solution.n_max(); ++n)
    rec.order_max_abs.push_back(tensor_max_abs(r.solution, n));
  return rec;
}

namespace {

std::size_t substep_count(double t_final, double max_step) {
  return static_cast<std::size_t>(std::ceil(t_final / max_step - 1e-12));
}

}  // namespace

SolveReport evolve_stepped(const ScaleParams& params, const PairPotential& pot, GeneratorKind kind,
                           const CorrelationHierarchy& u0, double t_final,
                           double substep_fraction, std::size_t m_max, double tol) {
  params.validate();
  if (!(t_final >= 0.0)) raise(ErrorKind::invalid_argument, "t_final must be >= 0");
  if (!(substep_fraction > 0.0 && substep_fraction < 1.0))
    raise(ErrorKind::invalid_argument, "substep fraction must lie in (0, 1)");
  const double radius = step_radius(norm_bound_M(params, pot), params.alpha, params.alpha0);

  SolveReport report{u0, 0, 0.0, radius, 0, {}};
  report.steps.push_back(make_step_record(0.0, report, params.z, params.alpha));
  if (t_final == 0.0) return report;

  const std::size_t n_steps = substep_count(t_final, substep_fraction * radius);
  const double h = t_final / static_cast<double>(n_steps);
  for (std::size_t s = 0; s < n_steps; ++s) {
    auto local = solve_local(params, pot, kind, report.solution, h, m_max, tol);
    report.solution = std::move(local.solution);
    report.terms_used = local.terms_used;
    report.tail_estimate = local.tail_estimate;
    report.steps.push_back(
        make_step_record(h * static_cast<double>(s + 1), report, params.z, params.alpha));
  }
  report.restarts = n_steps - 1;
  return report;
}

SolveReport evolve_global(const ScaleParams& params, const PairPotential& pot,
                          const CorrelationHierarchy& u0, double t_final,
                          const GlobalOptions& opts, GeneratorKind kind) {
  if (!(params.z > 0.0)) raise(ErrorKind::invalid_argument, "activity z must be positive");
  if (!(t_final >= 0.0)) raise(ErrorKind::invalid_argument, "t_final must be >= 0");
  if (!(opts.substep_fraction > 0.0 && opts.substep_fraction < 1.0))
    raise(ErrorKind::invalid_argument, "substep fraction must lie in (0, 1)");
  if (!(opts.alpha_fraction > 0.0 && opts.alpha_fraction < 1.0))
    raise(ErrorKind::invalid_argument, "alpha fraction must lie in (0, 1)");

  ScaleParams scale = params;
  scale.alpha0 = 1.0 / params.z;
  scale.alpha = opts.alpha_fraction * scale.alpha0;
  const double radius = step_radius(norm_bound_M(scale, pot), scale.alpha, scale.alpha0);

  auto check_margin = [&](const CorrelationHierarchy& k, double time, double allowed) {
    const double margin = ruelle_margin(k, params.z);
    if (!(margin <= 1.0 + allowed)) {
      std::ostringstream msg;
      msg << "Ruelle margin " << margin << " exceeds 1 + " << allowed << " at t = " << time;
      raise(ErrorKind::ruelle_violated, msg.str());
    }
  };
  check_margin(u0, 0.0, opts.ruelle_tol);

  SolveReport report{u0, 0, 0.0, radius, 0, {}};
  report.steps.push_back(make_step_record(0.0, report, params.z, scale.alpha));
  if (t_final == 0.0) return report;

  const std::size_t n_steps = substep_count(t_final, opts.substep_fraction * radius);
  const double h = t_final / static_cast<double>(n_steps);
  for (std::size_t s = 0; s < n_steps; ++s) {
    const double time = h * static_cast<double>(s);
    if (s > 0) check_margin(report.solution, time, opts.ruelle_drift_tol);
    auto local = solve_local(scale, pot, kind, report.solution, h, opts.m_max, opts.tol);
    report.solution = std::move(local.solution);
    report.terms_used = local.terms_used;
    report.tail_estimate = local.tail_estimate;
    report.steps.push_back(make_step_record(h * static_cast<double>(s + 1), report, params.z, scale.alpha));
  }
  check_margin(report.solution, t_final, opts.ruelle_drift_tol);
  report.restarts = n_steps - 1;
  return report;
}

double f_q_series(unsigned q, double t, double M, double gap, double tol) {
  if (!(t >= 0.0) || !(M > 0.0) || !(gap > 0.0) || !(tol > 0.0))
    raise(ErrorKind::invalid_argument, "f_q needs t >= 0, M > 0, gap > 0, tol > 0");
  const double x = t * M / gap;
  if (!(x < 1.0 / std::exp(1.0))) {
    std::ostringstream msg;
    msg << "t M / gap = " << x << " is not below 1/e";
    raise(ErrorKind::divergent_series, msg.str());
  }
  if (x == 0.0) return 0.0;

  constexpr std::size_t kMaxTerms = 10'000'000;
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t m = 1; m <= kMaxTerms; ++m) {
    const double md = static_cast<double>(m);
    const double log_term = q * std::log(md) - std::lgamma(md + 1.0) + md * std::log(x * md);
    const double term = std::exp(log_term);
    sum += term;
    if (term < tol && term < prev) return sum;
    prev = term;
  }
  raise(ErrorKind::no_convergence, "f_q series did not settle below tol");
}

Eigen::VectorXd matrix_exp_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double t,
                                  std::size_t max_entries) {
  if (a.rows() != a.cols() || a.cols() != v.size())
    raise(ErrorKind::invalid_argument, "matrix exponential needs a square matrix matching v");
  const auto dim = static_cast<std::size_t>(a.rows());
  if (dim > 0 && dim > max_entries / dim)
    raise(ErrorKind::memory_guard, "matrix exceeds the entry limit");
  const Eigen::MatrixXd scaled = t * a;
  return scaled.exp() * v;
}

}  // namespace gfdyn
