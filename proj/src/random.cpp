#include "gfdyn/random.hpp"

#include <cmath>

namespace gfdyn {

GridField random_field(const Grid& grid, Rng& rng, double lo, double hi) {
  GridField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.uniform(lo, hi);
  return f;
}

CorrelationHierarchy random_hierarchy(const Grid& grid, std::size_t n_max, Rng& rng,
                                      double envelope) {
  CorrelationHierarchy k(grid, n_max);
  k.tensor(0)[0] = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double scale = std::pow(envelope, static_cast<double>(n));
    for (double& v : k.tensor(n)) v = rng.uniform(-scale, scale);
  }
  return symmetrize(k);
}

}  // namespace gfdyn
