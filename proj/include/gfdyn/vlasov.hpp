#pragma once

#include <vector>

#include "gfdyn/lattice.hpp"

namespace gfdyn {

enum class TimeScheme { rk4, euler };

struct VlasovConfig {
  double z = 0.5;
  double dt = 1e-3;
  TimeScheme scheme = TimeScheme::rk4;
  double t_final = 0.0;
  /// Trajectory sampling interval; 0 keeps only the initial and final states.
  double sample_interval = 0.0;

  void validate() const;
};

struct TrajectorySample {
  double t;
  GridField rho;
};

struct VlasovResult {
  GridField final_state;
  std::vector<TrajectorySample> trajectory;
};

/// -rho + z exp(-(phi * rho)).
GridField vlasov_rhs(const GridField& rho, double z, const PairPotential& pot);

/// Fixed-step integration to cfg.t_final. The step is t_final / ceil(t_final / dt).
/// Throws nonfinite-state if the state stops being finite.
VlasovResult integrate(const GridField& rho0, const VlasovConfig& cfg, const PairPotential& pot);

/// Every sample satisfies ||rho_t||_inf <= max(||rho0||_inf, z) + 1e-9 and
/// rho_t >= -1e-9.
bool linf_bound_check(const std::vector<TrajectorySample>& trajectory, const GridField& rho0,
                      double z);

double stationary_residual(const GridField& rho, double z, const PairPotential& pot);

/// exp(sum_x rho(x) theta(x) dx), the generating functional of a Poisson state.
double exponential_gf_eval(const GridField& rho, const GridField& theta);

}  // namespace gfdyn
