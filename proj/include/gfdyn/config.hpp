#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "gfdyn/hierarchy.hpp"
#include "gfdyn/lattice.hpp"
#include "gfdyn/vlasov.hpp"

namespace gfdyn {

enum class PotentialKind { zero, gaussian, tophat, file };

/// Parameters shared by all harness commands. Parsed from `key = value`
/// lines; every key has a default.
struct ExperimentConfig {
  std::size_t n_sites = 8;
  double length = 8.0;

  PotentialKind potential_kind = PotentialKind::gaussian;
  double amplitude = 0.5;
  double width = 1.0;
  std::string potential_path;

  double z = 0.5;
  double epsilon = 1.0;

  std::size_t n_max = 3;

  double alpha = 0.5;
  double alpha0 = 1.0;
  std::size_t m_max = 200;
  double tol = 1e-14;

  double t_final = 0.05;
  double substep_fraction = 0.9;

  double vlasov_dt = 1e-3;
  TimeScheme scheme = TimeScheme::rk4;
  double sample_interval = 0.1;

  /// Level of the initial density; z when unset.
  std::optional<double> initial_density;
  /// Relative amplitude of a cos(2 pi x / L) modulation of the initial density.
  double initial_modulation = 0.0;

  std::uint64_t seed = 20111024;

  void validate() const;
};

/// Throws parse-error (with the line number) on malformed lines, unknown keys
/// or invalid values.
ExperimentConfig parse_config_text(std::string_view text, std::string_view source = "<string>");
ExperimentConfig parse_config(const std::filesystem::path& path);

Grid config_grid(const ExperimentConfig& cfg);
PairPotential config_potential(const ExperimentConfig& cfg);
ScaleParams config_scale(const ExperimentConfig& cfg);
/// rho0(x) = level (1 + modulation cos(2 pi x / L)).
GridField config_initial_density(const ExperimentConfig& cfg);
VlasovConfig config_vlasov(const ExperimentConfig& cfg);

}  // namespace gfdyn
