#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gfdyn {

/// Periodic 1-D lattice of `n_sites` points on a box of length `length`.
class Grid {
 public:
  Grid(std::size_t n_sites, double length);

  std::size_t n_sites() const noexcept { return n_sites_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return spacing_; }

  /// Periodic displacement index (from - to) mod n_sites.
  std::size_t displacement(std::size_t from, std::size_t to) const noexcept {
    return (from + n_sites_ - to) % n_sites_;
  }

  /// Minimum-image distance for displacement index d, in length units.
  double min_image_distance(std::size_t d) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_sites_;
  double length_;
  double spacing_;
};

Grid make_grid(std::size_t n_sites, double length);

void require_same_grid(const Grid& a, const Grid& b);

/// A real function on the sites of a grid.
class GridField {
 public:
  explicit GridField(const Grid& grid, double fill = 0.0);
  GridField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

double field_l1_norm(const GridField& f);
double field_linf_norm(const GridField& f);

/// Non-negative even pair interaction sampled by periodic displacement.
class PairPotential {
 public:
  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t d) const { return values_[d]; }
  double norm_l1() const noexcept { return norm_l1_; }
  double norm_linf() const noexcept { return norm_linf_; }

  /// phi(x - y) with periodic displacement.
  double between(std::size_t x, std::size_t y) const { return values_[grid_.displacement(x, y)]; }

  bool is_zero() const noexcept { return norm_linf_ == 0.0; }

 private:
  friend PairPotential potential_from_samples(const Grid&, std::vector<double>);
  PairPotential(const Grid& grid, std::vector<double> values);

  Grid grid_;
  std::vector<double> values_;
  double norm_l1_ = 0.0;
  double norm_linf_ = 0.0;
};

/// Validates non-negativity and evenness (tolerance 1e-12) and precomputes norms.
PairPotential potential_from_samples(const Grid& grid, std::vector<double> values);

PairPotential zero_potential(const Grid& grid);
/// amplitude * exp(-r^2 / width^2), r the minimum-image distance.
PairPotential gaussian_potential(const Grid& grid, double amplitude, double width);
/// amplitude for minimum-image distance <= width, zero beyond.
PairPotential tophat_potential(const Grid& grid, double amplitude, double width);

/// out(x) = sum_y phi(x - y) f(y) dx, by direct summation.
GridField convolve(const PairPotential& pot, const GridField& f);

/// E(x, xi) = sum_{y in xi} phi(x - y); xi may contain repeated sites.
double relative_energy(const PairPotential& pot, std::size_t x, std::span<const std::size_t> xi);

}  // namespace gfdyn
