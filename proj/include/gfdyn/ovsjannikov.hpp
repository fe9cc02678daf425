#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gfdyn/glauber.hpp"
#include "gfdyn/hierarchy.hpp"

namespace gfdyn {

using LinearOperator = std::function<CorrelationHierarchy(const CorrelationHierarchy&)>;

/// One row of solver diagnostics, recorded after each local solve.
struct StepRecord {
  double time = 0.0;
  std::size_t terms_used = 0;
  double tail_estimate = 0.0;
  double ruelle_margin = 0.0;
  double scale_norm = 0.0;
  /// max |k^(n)| for n = 0..n_max.
  std::vector<double> order_max_abs;
};

struct SolveReport {
  CorrelationHierarchy solution;
  std::size_t terms_used = 0;
  /// Scale norm of the last series term added.
  double tail_estimate = 0.0;
  /// Guaranteed lifetime delta (alpha0 - alpha) of one local solve.
  double radius = 0.0;
  std::size_t restarts = 0;
  std::vector<StepRecord> steps;
};

/// Diagnostics of `report.solution` at the given time.
StepRecord make_step_record(double time, const SolveReport& report, double z, double alpha);

struct TaylorOptions {
  std::size_t m_max = 200;
  double tol = 1e-14;
  /// Scale index at which term norms are measured.
  double alpha = 0.5;
};

/// delta (alpha0 - alpha) with delta = 1 / (e M).
double step_radius(double M, double alpha, double alpha0);

/// u(t) = sum_m t^m / m! A^m u0, stopping at the first term whose scale norm
/// drops below tol. Throws no-convergence if m_max terms do not suffice.
SolveReport taylor_evolve(const LinearOperator& apply, const CorrelationHierarchy& u0, double t,
                          const TaylorOptions& opts);

/// One local solve of dB/dt = L B for t strictly inside the guaranteed
/// interval [0, step_radius(norm_bound_M(params, pot), alpha, alpha0)).
SolveReport solve_local(const ScaleParams& params, const PairPotential& pot, GeneratorKind kind,
                        const CorrelationHierarchy& u0, double t, std::size_t m_max, double tol);

/// Repeated local solves of equal length, each at most substep_fraction of
/// the radius for (params.alpha, params.alpha0). No Ruelle bookkeeping.
SolveReport evolve_stepped(const ScaleParams& params, const PairPotential& pot, GeneratorKind kind,
                           const CorrelationHierarchy& u0, double t_final,
                           double substep_fraction, std::size_t m_max, double tol);

struct GlobalOptions {
  double substep_fraction = 0.9;
  std::size_t m_max = 200;
  double tol = 1e-14;
  /// Admissible excess of the initial Ruelle margin over 1.
  double ruelle_tol = 1e-6;
  /// Admissible excess of the Ruelle margin over 1 before each restart.
  double ruelle_drift_tol = 1e-3;
  /// Target scale index as a fraction of alpha0 = 1 / z.
  double alpha_fraction = 0.5;
};

/// Global continuation for initial data under the Ruelle bound k <= z^|eta|.
/// Runs in the scale alpha0 = 1 / z, alpha = alpha_fraction * alpha0, and
/// restarts from the current state after each local solve.
SolveReport evolve_global(const ScaleParams& params, const PairPotential& pot,
                          const CorrelationHierarchy& u0, double t_final,
                          const GlobalOptions& opts = {},
                          GeneratorKind kind = GeneratorKind::glauber());

/// f_q(t) = sum_{m>=1} m^q / m! (t m M / gap)^m, summed until the terms
/// fall below tol. Requires t M / gap < 1 / e.
double f_q_series(unsigned q, double t, double M, double gap, double tol = 1e-16);

/// e^{tA} v by scaling and squaring of the dense matrix.
Eigen::VectorXd matrix_exp_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double t,
                                  std::size_t max_entries = kDefaultMaxEntries);

}  // namespace gfdyn
