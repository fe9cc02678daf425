#include "gfdyn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfdyn/error.hpp"

namespace gfdyn {

namespace {

constexpr double kEvennessTolerance = 1e-12;

}  // namespace

Grid::Grid(std::size_t n_sites, double length)
    : n_sites_(n_sites), length_(length), spacing_(0.0) {
  if (n_sites < 2) raise(ErrorKind::invalid_argument, "grid needs at least 2 sites");
  if (!(length > 0.0) || !std::isfinite(length))
    raise(ErrorKind::invalid_argument, "grid length must be positive and finite");
  spacing_ = length / static_cast<double>(n_sites);
}

double Grid::min_image_distance(std::size_t d) const noexcept {
  const std::size_t k = std::min(d % n_sites_, n_sites_ - d % n_sites_);
  return static_cast<double>(k) * spacing_;
}

Grid make_grid(std::size_t n_sites, double length) { return Grid(n_sites, length); }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) raise(ErrorKind::grid_mismatch, "operands live on different grids");
}

GridField::GridField(const Grid& grid, double fill) : grid_(grid), values_(grid.n_sites(), fill) {}

GridField::GridField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_sites())
    raise(ErrorKind::invalid_argument, "field size does not match the grid");
  for (double v : values_)
    if (!std::isfinite(v)) raise(ErrorKind::invalid_argument, "field values must be finite");
}

double field_l1_norm(const GridField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += std::abs(v);
  return sum * f.grid().spacing();
}

double field_linf_norm(const GridField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

PairPotential::PairPotential(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  double sum = 0.0;
  for (double v : values_) {
    sum += std::abs(v);
    norm_linf_ = std::max(norm_linf_, std::abs(v));
  }
  norm_l1_ = sum * grid_.spacing();
}

PairPotential potential_from_samples(const Grid& grid, std::vector<double> values) {
  const std::size_t n = grid.n_sites();
  if (values.size() != n) raise(ErrorKind::invalid_argument, "potential size does not match the grid");
  for (std::size_t d = 0; d < n; ++d) {
    if (!std::isfinite(values[d]))
      raise(ErrorKind::invalid_argument, "potential values must be finite");
    if (values[d] < 0.0) {
      std::ostringstream msg;
      msg << "potential is negative at displacement " << d;
      raise(ErrorKind::invalid_argument, msg.str());
    }
  }
  for (std::size_t d = 1; d < n; ++d) {
    if (std::abs(values[d] - values[n - d]) > kEvennessTolerance) {
      std::ostringstream msg;
      msg << "potential is not even: phi[" << d << "] != phi[" << n - d << "]";
      raise(ErrorKind::invalid_argument, msg.str());
    }
  }
  return PairPotential(grid, std::move(values));
}

PairPotential zero_potential(const Grid& grid) {
  return potential_from_samples(grid, std::vector<double>(grid.n_sites(), 0.0));
}

PairPotential gaussian_potential(const Grid& grid, double amplitude, double width) {
  if (amplitude < 0.0 || !(width > 0.0))
    raise(ErrorKind::invalid_argument, "gaussian potential needs amplitude >= 0 and width > 0");
  std::vector<double> v(grid.n_sites());
  for (std::size_t d = 0; d < v.size(); ++d) {
    const double r = grid.min_image_distance(d);
    v[d] = amplitude * std::exp(-(r * r) / (width * width));
  }
  return potential_from_samples(grid, std::move(v));
}

PairPotential tophat_potential(const Grid& grid, double amplitude, double width) {
  if (amplitude < 0.0 || width < 0.0)
    raise(ErrorKind::invalid_argument, "tophat potential needs amplitude >= 0 and width >= 0");
  std::vector<double> v(grid.n_sites());
  for (std::size_t d = 0; d < v.size(); ++d)
    v[d] = grid.min_image_distance(d) <= width ? amplitude : 0.0;
  return potential_from_samples(grid, std::move(v));
}

GridField convolve(const PairPotential& pot, const GridField& f) {
  require_same_grid(pot.grid(), f.grid());
  const Grid& g = f.grid();
  const std::size_t n = g.n_sites();
  GridField out(g);
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) acc += pot.between(x, y) * f[y];
    out[x] = acc * g.spacing();
  }
  return out;
}

double relative_energy(const PairPotential& pot, std::size_t x, std::span<const std::size_t> xi) {
  const std::size_t n = pot.grid().n_sites();
  if (x >= n) raise(ErrorKind::index_out_of_range, "site index out of range");
  double e = 0.0;
  for (std::size_t y : xi) {
    if (y >= n) raise(ErrorKind::index_out_of_range, "configuration site index out of range");
    e += pot.between(x, y);
  }
  return e;
}

}  // namespace gfdyn
