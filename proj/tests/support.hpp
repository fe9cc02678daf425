#pragma once

// Independent oracles and small generators shared by the unit tests. Nothing
// here calls into the evaluation code under test except to read tensors.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gfdyn/error.hpp"
#include "gfdyn/hierarchy.hpp"
#include "gfdyn/lattice.hpp"
#include "gfdyn/random.hpp"

namespace testing {

using namespace gfdyn;

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// Kind of the gfdyn::Error thrown by f, or nullopt-like sentinel -1 when none.
inline int thrown_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

inline int kind_id(ErrorKind k) { return static_cast<int>(k); }

/// Calls f(tuple) for every n-tuple of sites in row-major order.
inline void for_each_tuple(std::size_t n_sites, std::size_t n,
                           const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    f(idx);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n_sites) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

inline double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

/// Order-n part of the GF by exhaustive tuple enumeration.
inline double brute_gf_order(const CorrelationHierarchy& k, const GridField& theta, std::size_t n) {
  const double dx = k.grid().spacing();
  double acc = 0.0;
  for_each_tuple(k.n_sites(), n, [&](const std::vector<std::size_t>& t) {
    double p = k.at(t);
    for (auto s : t) p *= theta[s];
    acc += p;
  });
  return acc * std::pow(dx, static_cast<double>(n)) / factorial(n);
}

inline double brute_gf(const CorrelationHierarchy& k, const GridField& theta) {
  double acc = 0.0;
  for (std::size_t n = 0; n <= k.n_max(); ++n) acc += brute_gf_order(k, theta, n);
  return acc;
}

inline GridField multiply(const GridField& a, const GridField& b) {
  GridField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

inline GridField affine(const GridField& a, const GridField& theta, const GridField& b) {
  GridField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * theta[i] + b[i];
  return out;
}

inline GridField constant(const Grid& g, double c) { return GridField(g, c); }

/// Random symmetric hierarchy with k^(0) drawn too, so order 0 is exercised.
inline CorrelationHierarchy random_k(const Grid& g, std::size_t n_max, Rng& rng, double env = 0.5) {
  CorrelationHierarchy k = random_hierarchy(g, n_max, rng, env);
  k.tensor(0)[0] = rng.uniform(0.5, 1.5);
  return k;
}

inline PairPotential random_potential(const Grid& g, Rng& rng, double amp = 0.5) {
  const std::size_t n = g.n_sites();
  std::vector<double> v(n);
  for (std::size_t d = 0; d <= n / 2; ++d) {
    v[d] = amp * rng.unit();
    v[(n - d) % n] = v[d];
  }
  return potential_from_samples(g, v);
}

}  // namespace testing
