#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "gfdyn/lattice.hpp"

namespace gfdyn {

inline constexpr std::size_t kDefaultMaxEntries = 10'000'000;

/// Scale indices, activity and scaling parameter of a run. epsilon = 0 marks
/// the Vlasov limit.
struct ScaleParams {
  double alpha = 0.5;
  double alpha0 = 1.0;
  double z = 0.5;
  double epsilon = 1.0;

  /// Throws invalid-argument unless 0 < alpha < alpha0, z > 0, epsilon >= 0.
  void validate() const;
};

/// Truncated family of correlation tensors k^(0) .. k^(n_max) on a grid.
///
/// Tensor n is stored densely in row-major order with n_sites^n entries, so
/// the site tuple (i1, ..., in) lives at i1 N^(n-1) + ... + in. The order-0
/// tensor is a single scalar. Orders above n_max are treated as zero.
///
/// Correlation functions are symmetric tensors; operations in this library
/// preserve symmetry, but the container itself also holds general tensors so
/// that linear maps on the flattened space (matrix assembly) are well defined.
class CorrelationHierarchy {
 public:
  CorrelationHierarchy(const Grid& grid, std::size_t n_max,
                       std::size_t max_entries = kDefaultMaxEntries);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t n_max() const noexcept { return tensors_.size() - 1; }
  std::size_t n_sites() const noexcept { return grid_.n_sites(); }

  std::span<const double> tensor(std::size_t n) const { return tensors_.at(n); }
  std::span<double> tensor(std::size_t n) { return tensors_.at(n); }

  double at(std::span<const std::size_t> sites) const;
  double& at(std::span<const std::size_t> sites);

  /// Total number of stored entries, sum_n n_sites^n.
  std::size_t flat_size() const noexcept;

 private:
  std::size_t linear_index(std::span<const std::size_t> sites) const;

  Grid grid_;
  std::vector<std::vector<double>> tensors_;
};

/// Number of entries N^n, or throws memory-guard above `max_entries`.
std::size_t tensor_size(std::size_t n_sites, std::size_t order,
                        std::size_t max_entries = kDefaultMaxEntries);

/// Hierarchy of the coherent state: k^(n)(x1..xn) = prod rho(x_i).
CorrelationHierarchy exponential_hierarchy(const GridField& rho, std::size_t n_max,
                                           std::size_t max_entries = kDefaultMaxEntries);

/// B(theta) = sum_n dx^n / n! sum_{x1..xn} k^(n)(x1..xn) prod theta(x_i).
double evaluate_gf(const CorrelationHierarchy& k, const GridField& theta);

/// The part of the sum above restricted to orders lo..hi (clamped to n_max).
double evaluate_gf_orders(const CorrelationHierarchy& k, const GridField& theta,
                          std::size_t lo, std::size_t hi);

/// First variational derivative dB(theta; x).
double variational_derivative(const CorrelationHierarchy& k, const GridField& theta,
                              std::size_t x);

/// Hierarchy of theta -> B(a theta + b) under the shared truncation.
CorrelationHierarchy substitute_affine(const CorrelationHierarchy& k, const GridField& a,
                                       const GridField& b);

/// Same as above but only orders 0..m_limit of the result are filled; higher
/// orders are left zero.
CorrelationHierarchy substitute_affine(const CorrelationHierarchy& k, const GridField& a,
                                       const GridField& b, std::size_t m_limit);

/// Mixed central finite-difference estimate of k^(n)(sites), computed from
/// evaluate_gf alone. Throws precision-failure when the estimates for the
/// tuple and its reversal disagree by more than 1e-6.
double taylor_coefficient_fd(const CorrelationHierarchy& k, std::span<const std::size_t> sites,
                             double step = 1e-5);

double tensor_max_abs(const CorrelationHierarchy& k, std::size_t n);

/// sup_n alpha^n max|k^(n)|.
double scale_norm(const CorrelationHierarchy& k, double alpha);

/// sup_n z^-n max|k^(n)|; at most 1 iff the Ruelle bound k(eta) <= z^|eta| holds.
double ruelle_margin(const CorrelationHierarchy& k, double z);

/// sum_n max|k^(n)| r^n / n!, a majorant of |B| on the L1 ball of radius r.
double gf_upper_bound(const CorrelationHierarchy& k, double r);

/// Cauchy estimate for the n-th Taylor kernel against the majorant at radius r.
bool cauchy_estimate_check(const CorrelationHierarchy& k, std::size_t n, double r);

/// a * k1 + k2 entrywise.
CorrelationHierarchy axpy(double a, const CorrelationHierarchy& k1, const CorrelationHierarchy& k2);

std::vector<double> flatten(const CorrelationHierarchy& k);
CorrelationHierarchy unflatten(const Grid& grid, std::size_t n_max, std::span<const double> flat);

/// Average over all index permutations of every tensor.
CorrelationHierarchy symmetrize(const CorrelationHierarchy& k);

bool is_symmetric(const CorrelationHierarchy& k, double tol = 0.0);

double max_abs_difference(const CorrelationHierarchy& k1, const CorrelationHierarchy& k2);

void require_same_shape(const CorrelationHierarchy& k1, const CorrelationHierarchy& k2);

/// Plain-text snapshot: header `n_sites,length,n_max`, its values, then one
/// `n,i1,...,in,value` line per entry. Values use shortest round-trip form.
void write_snapshot(std::ostream& os, const CorrelationHierarchy& k);
CorrelationHierarchy read_snapshot(std::istream& is);

}  // namespace gfdyn
