#include "gfdyn/vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfdyn/error.hpp"

namespace gfdyn {

void VlasovConfig::validate() const {
  if (!(z > 0.0)) raise(ErrorKind::invalid_argument, "activity z must be positive");
  if (!(dt > 0.0)) raise(ErrorKind::invalid_argument, "time step must be positive");
  if (!(t_final >= 0.0)) raise(ErrorKind::invalid_argument, "t_final must be >= 0");
  if (t_final > 0.0 && dt > t_final)
    raise(ErrorKind::invalid_argument, "time step exceeds t_final");
  if (!(sample_interval >= 0.0))
    raise(ErrorKind::invalid_argument, "sample interval must be >= 0");
}

GridField vlasov_rhs(const GridField& rho, double z, const PairPotential& pot) {
  GridField out = convolve(pot, rho);
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = -rho[x] + z * std::exp(-out[x]);
  return out;
}

namespace {

// y + h * k
GridField shifted(const GridField& y, double h, const GridField& k) {
  GridField out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * k[i];
  return out;
}

GridField step(const GridField& y, double h, double z, const PairPotential& pot,
               TimeScheme scheme) {
  const GridField k1 = vlasov_rhs(y, z, pot);
  if (scheme == TimeScheme::euler) return shifted(y, h, k1);
  const GridField k2 = vlasov_rhs(shifted(y, 0.5 * h, k1), z, pot);
  const GridField k3 = vlasov_rhs(shifted(y, 0.5 * h, k2), z, pot);
  const GridField k4 = vlasov_rhs(shifted(y, h, k3), z, pot);
  GridField out = y;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

VlasovResult integrate(const GridField& rho0, const VlasovConfig& cfg, const PairPotential& pot) {
  cfg.validate();
  require_same_grid(rho0.grid(), pot.grid());
  for (double v : rho0.values())
    if (v < 0.0) raise(ErrorKind::invalid_argument, "initial density must be non-negative");

  VlasovResult result{rho0, {{0.0, rho0}}};
  if (cfg.t_final == 0.0) return result;

  const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  const double h = cfg.t_final / static_cast<double>(n_steps);
  std::size_t every = n_steps;
  if (cfg.sample_interval > 0.0)
    every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.sample_interval / h)));

  GridField y = rho0;
  for (std::size_t s = 1; s <= n_steps; ++s) {
    y = step(y, h, cfg.z, pot, cfg.scheme);
    for (double v : y.values()) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "density became non-finite at t = " << h * static_cast<double>(s);
        raise(ErrorKind::nonfinite_state, msg.str());
      }
    }
    if (s % every == 0 || s == n_steps) result.trajectory.push_back({h * static_cast<double>(s), y});
  }
  result.trajectory.back().t = cfg.t_final;
  result.final_state = std::move(y);
  return result;
}

bool linf_bound_check(const std::vector<TrajectorySample>& trajectory, const GridField& rho0,
                      double z) {
  const double bound = std::max(field_linf_norm(rho0), z) + 1e-9;
  for (const auto& sample : trajectory) {
    if (field_linf_norm(sample.rho) > bound) return false;
    for (double v : sample.rho.values())
      if (v < -1e-9) return false;
  }
  return true;
}

double stationary_residual(const GridField& rho, double z, const PairPotential& pot) {
  return field_linf_norm(vlasov_rhs(rho, z, pot));
}

double exponential_gf_eval(const GridField& rho, const GridField& theta) {
  require_same_grid(rho.grid(), theta.grid());
  double acc = 0.0;
  for (std::size_t x = 0; x < rho.size(); ++x) acc += rho[x] * theta[x];
  return std::exp(acc * rho.grid().spacing());
}

}  // namespace gfdyn
