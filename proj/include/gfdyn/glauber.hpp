#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "gfdyn/hierarchy.hpp"
#include "gfdyn/lattice.hpp"

namespace gfdyn {

/// Which of the three generator families acts on a hierarchy.
class GeneratorKind {
 public:
  enum class Type { glauber, rescaled, vlasov_limit };

  static GeneratorKind glauber() { return GeneratorKind(Type::glauber, 1.0); }
  static GeneratorKind rescaled(double epsilon);
  static GeneratorKind vlasov_limit() { return GeneratorKind(Type::vlasov_limit, 0.0); }
  /// epsilon = 0 -> vlasov_limit, epsilon = 1 -> glauber, otherwise rescaled.
  static GeneratorKind from_epsilon(double epsilon);

  Type type() const noexcept { return type_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  GeneratorKind(Type type, double epsilon) : type_(type), epsilon_(epsilon) {}

  Type type_;
  double epsilon_;
};

/// Multiplier a_x and shift b_x of the birth argument a_x theta + b_x.
struct ShiftFields {
  GridField a;
  GridField b;
};

ShiftFields shift_fields(const PairPotential& pot, GeneratorKind kind, std::size_t x);

/// Constants c0 = sup_x ||a_x||_inf and c1 = sup_x ||b_x||_1 of the shift fields.
struct ShiftBounds {
  double c0 = 0.0;
  double c1 = 0.0;
};

ShiftBounds shift_bounds(const PairPotential& pot, GeneratorKind kind);

/// out^(n) = n k^(n): the kernel of theta -> int theta(x) dB(theta; x) dx.
CorrelationHierarchy apply_death(const CorrelationHierarchy& k);

/// Kernel of theta -> int theta(x) B(a_x theta + b_x) dx, truncated at n_max.
///
/// With c_x the substituted hierarchy of B(a_x . + b_x),
///   out^(n)(x1..xn) = sum_i c_{x_i}^(n-1)(x1..x_{i-1}, x_{i+1}..xn).
CorrelationHierarchy apply_birth(const CorrelationHierarchy& k, const PairPotential& pot,
                                 GeneratorKind kind);

/// -apply_death(k) + z apply_birth(k).
CorrelationHierarchy apply_generator(const CorrelationHierarchy& k, const ScaleParams& params,
                                     const PairPotential& pot, GeneratorKind kind);

/// int theta(x) dB(theta; x) dx evaluated directly.
double evaluate_death_gf(const CorrelationHierarchy& k, const GridField& theta);

/// int theta(x) B(a_x theta + b_x) dx evaluated directly (no truncation of
/// the theta-degree).
double evaluate_birth_gf(const CorrelationHierarchy& k, const GridField& theta,
                         const PairPotential& pot, GeneratorKind kind);

/// The generator applied to B and evaluated at theta, straight from the
/// functional form -int theta (dB - z B(a_x theta + b_x)). The result is a
/// polynomial of degree n_max + 1 in theta.
double evaluate_generator_gf_full(const CorrelationHierarchy& k, const GridField& theta,
                                  const ScaleParams& params, const PairPotential& pot,
                                  GeneratorKind kind);

/// As evaluate_generator_gf_full but with the theta-degree n_max + 1 part
/// removed, i.e. projected onto the truncated space. This is the direct
/// counterpart of evaluate_gf(apply_generator(k), theta).
double evaluate_generator_gf(const CorrelationHierarchy& k, const GridField& theta,
                             const ScaleParams& params, const PairPotential& pot,
                             GeneratorKind kind);

/// Column j is flatten(apply_generator(unflatten(e_j))).
Eigen::MatrixXd assemble_matrix(const Grid& grid, std::size_t n_max, const ScaleParams& params,
                                const PairPotential& pot, GeneratorKind kind,
                                std::size_t max_entries = kDefaultMaxEntries);

/// M = alpha0 (1 + z alpha0 exp(||phi||_1 / alpha - 1)); the generator maps
/// the alpha'' space into the alpha' space with norm at most M / (alpha'' - alpha').
/// The same constant holds for all three kinds.
double norm_bound_M(const ScaleParams& params, const PairPotential& pot);

/// eps z ||phi||_inf e^{||phi||_1/alpha} (||phi||_1 alpha0 / gap + 4 alpha0^3 / (gap^2 e)),
/// gap = alpha'' - alpha', bounding the rescaled-minus-limit generator.
double vlasov_gap_bound(double epsilon, const ScaleParams& params, const PairPotential& pot,
                        double alpha_prime, double alpha_dprime);

}  // namespace gfdyn
