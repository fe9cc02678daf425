#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gfdyn/config.hpp"
#include "gfdyn/csv.hpp"
#include "gfdyn/glauber.hpp"
#include "gfdyn/ovsjannikov.hpp"
#include "gfdyn/vlasov.hpp"

namespace gfdyn {

// Every command computes its tables first and writes them only if `out_dir`
// is set, so the in-process results and the files are the same bytes.

enum class EvolveMode { automatic, local, global };

struct EvolveResult {
  SolveReport report;
  bool used_global = false;
  CsvTable diagnostics{{"t", "n", "max_abs", "scale_norm", "ruelle_margin"}};
  CsvTable steps{{"t", "terms_used", "tail_estimate", "ruelle_margin", "scale_norm"}};
  std::string snapshot{};
};

/// Evolves the Poisson-type initial hierarchy of the config. Automatic mode
/// uses one local solve when t_final lies inside the local radius and the
/// global continuation otherwise. Writes evolve_diagnostics.csv,
/// evolve_steps.csv and evolve_snapshot.txt.
EvolveResult cmd_evolve(const ExperimentConfig& cfg, EvolveMode mode,
                        const std::optional<std::filesystem::path>& out_dir);

struct VlasovRunResult {
  VlasovResult run;
  double residual = 0.0;
  bool bound_ok = false;
  /// Max deviation from z + (rho0 - z) e^{-t}; only for the zero potential.
  std::optional<double> closed_form_error{};
  CsvTable trajectory{{"t", "site_index", "rho_value"}};
  CsvTable summary{{"t_final", "stationary_residual", "linf_bound", "closed_form_max_error"}};
};

/// Writes vlasov_trajectory.csv and vlasov_summary.csv.
VlasovRunResult cmd_vlasov(const ExperimentConfig& cfg,
                           const std::optional<std::filesystem::path>& out_dir);

struct ScalingStudyResult {
  std::vector<double> epsilons;
  std::vector<double> gaps;
  double fitted_order = 0.0;
  CsvTable table{{"epsilon", "gap"}};
  CsvTable fit{{"fitted_order", "points"}};
};

/// Number of random test functions in the sampled GF distance.
inline constexpr std::size_t kScalingSamples = 20;

/// Least-squares slope of log(gap) against log(epsilon).
double fit_log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Evolves the common initial hierarchy with every rescaled generator and
/// with the limit generator to cfg.t_final, which must lie inside the shared
/// local radius. Writes scaling_study.csv and scaling_fit.csv.
ScalingStudyResult cmd_scaling_study(const ExperimentConfig& cfg,
                                     const std::vector<double>& epsilons,
                                     const std::optional<std::filesystem::path>& out_dir);

/// Sampled GF distance max_theta |B1(theta) - B2(theta)| e^{-||theta||_1 / alpha}.
double sampled_gf_distance(const CorrelationHierarchy& k1, const CorrelationHierarchy& k2,
                           double alpha, std::uint64_t seed, std::size_t samples = kScalingSamples);

struct ChaosResult {
  double dev1 = 0.0;
  double dev2 = 0.0;
  double max_mean_field = 0.0;
  bool pass = false;
  CsvTable table{{"t_final", "dev1", "dev2", "max_phi_conv_rho", "verdict"}};
};

inline constexpr double kChaosTolerance = 1e-3;
inline constexpr double kChaosMeanFieldLimit = 0.2;

/// Evolves exponential_hierarchy(rho0) under the limit generator and compares
/// orders 1 and 2 with rho_t and rho_t x rho_t from the kinetic equation.
/// Writes chaos_check.csv.
ChaosResult cmd_chaos_check(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& out_dir);

struct SuiteReport {
  std::string name;
  std::size_t checks = 0;
  std::size_t violations = 0;
  /// Largest observed lhs / rhs.
  double max_ratio = 0.0;
};

struct BoundsReport {
  std::vector<SuiteReport> suites;
  CsvTable table{{"suite", "checks", "violations", "max_ratio"}};

  std::size_t total_violations() const;
};

/// Sampled inequality suites over n_cases random hierarchies under the Ruelle
/// envelope of the config activity. Writes verify_bounds.csv.
BoundsReport cmd_verify_bounds(const ExperimentConfig& cfg, std::size_t n_cases,
                               const std::optional<std::filesystem::path>& out_dir);

}  // namespace gfdyn
