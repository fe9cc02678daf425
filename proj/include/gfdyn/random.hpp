#pragma once

#include <cstdint>
#include <random>

#include "gfdyn/hierarchy.hpp"
#include "gfdyn/lattice.hpp"

namespace gfdyn {

/// Seeded source of reproducible doubles. The conversion from raw 64-bit
/// output is spelled out so streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

GridField random_field(const Grid& grid, Rng& rng, double lo, double hi);

/// Symmetric hierarchy with k^(0) = 1 and entries of order n uniform in
/// [-envelope^n, envelope^n] before symmetrization, so the Ruelle bound with
/// activity `envelope` holds.
CorrelationHierarchy random_hierarchy(const Grid& grid, std::size_t n_max, Rng& rng,
                                      double envelope);

}  // namespace gfdyn
