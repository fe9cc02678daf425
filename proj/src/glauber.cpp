#include "gfdyn/glauber.hpp"

#include <cmath>
#include <vector>

#include "gfdyn/error.hpp"

namespace gfdyn {

namespace {

// Below this epsilon the rescaled shift uses its second-order expansion.
constexpr double kSmallEpsilon = 1e-8;

double multiplier(double phi, GeneratorKind kind) {
  switch (kind.type()) {
    case GeneratorKind::Type::glauber: return std::exp(-phi);
    case GeneratorKind::Type::rescaled: return std::exp(-kind.epsilon() * phi);
    case GeneratorKind::Type::vlasov_limit: return 1.0;
  }
  return 1.0;
}

double shift(double phi, GeneratorKind kind) {
  switch (kind.type()) {
    case GeneratorKind::Type::glauber: return std::expm1(-phi);
    case GeneratorKind::Type::rescaled: {
      const double eps = kind.epsilon();
      if (eps < kSmallEpsilon) return -phi * (1.0 - 0.5 * eps * phi);
      return std::expm1(-eps * phi) / eps;
    }
    case GeneratorKind::Type::vlasov_limit: return -phi;
  }
  return 0.0;
}

}  // namespace

GeneratorKind GeneratorKind::rescaled(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    raise(ErrorKind::invalid_argument, "rescaled generator needs epsilon > 0");
  return GeneratorKind(Type::rescaled, epsilon);
}

GeneratorKind GeneratorKind::from_epsilon(double epsilon) {
  if (epsilon == 0.0) return vlasov_limit();
  if (epsilon == 1.0) return glauber();
  return rescaled(epsilon);
}

ShiftFields shift_fields(const PairPotential& pot, GeneratorKind kind, std::size_t x) {
  const Grid& g = pot.grid();
  if (x >= g.n_sites()) raise(ErrorKind::index_out_of_range, "site index out of range");
  ShiftFields f{GridField(g), GridField(g)};
  for (std::size_t y = 0; y < g.n_sites(); ++y) {
    const double phi = pot.between(x, y);
    f.a[y] = multiplier(phi, kind);
    f.b[y] = shift(phi, kind);
  }
  return f;
}

ShiftBounds shift_bounds(const PairPotential& pot, GeneratorKind kind) {
  ShiftBounds c;
  for (std::size_t x = 0; x < pot.grid().n_sites(); ++x) {
    const auto f = shift_fields(pot, kind, x);
    c.c0 = std::max(c.c0, field_linf_norm(f.a));
    c.c1 = std::max(c.c1, field_l1_norm(f.b));
  }
  return c;
}

CorrelationHierarchy apply_death(const CorrelationHierarchy& k) {
  CorrelationHierarchy out(k.grid(), k.n_max());
  for (std::size_t n = 1; n <= k.n_max(); ++n) {
    auto o = out.tensor(n);
    auto t = k.tensor(n);
    const double w = static_cast<double>(n);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = w * t[i];
  }
  return out;
}

CorrelationHierarchy apply_birth(const CorrelationHierarchy& k, const PairPotential& pot,
                                 GeneratorKind kind) {
  require_same_grid(k.grid(), pot.grid());
  const std::size_t n_max = k.n_max();
  const std::size_t n_sites = k.n_sites();
  CorrelationHierarchy out(k.grid(), n_max);
  if (n_max == 0) return out;

  std::vector<CorrelationHierarchy> subst;
  subst.reserve(n_sites);
  for (std::size_t x = 0; x < n_sites; ++x) {
    const auto f = shift_fields(pot, kind, x);
    subst.push_back(substitute_affine(k, f.a, f.b, n_max - 1));
  }

  for (std::size_t n = 1; n <= n_max; ++n) {
    auto o = out.tensor(n);
    // stride[i] = N^(n-1-i): weight of slot i in the row-major index.
    std::vector<std::size_t> stride(n);
    stride[n - 1] = 1;
    for (std::size_t i = n - 1; i-- > 0;) stride[i] = stride[i + 1] * n_sites;
    for (std::size_t idx = 0; idx < o.size(); ++idx) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t high = idx / (stride[i] * n_sites);
        const std::size_t low = idx % stride[i];
        const std::size_t site = (idx / stride[i]) % n_sites;
        acc += subst[site].tensor(n - 1)[high * stride[i] + low];
      }
      o[idx] = acc;
    }
  }
  return out;
}

CorrelationHierarchy apply_generator(const CorrelationHierarchy& k, const ScaleParams& params,
                                     const PairPotential& pot, GeneratorKind kind) {
  return axpy(-1.0, apply_death(k), axpy(params.z, apply_birth(k, pot, kind),
                                         CorrelationHierarchy(k.grid(), k.n_max())));
}

double evaluate_death_gf(const CorrelationHierarchy& k, const GridField& theta) {
  require_same_grid(k.grid(), theta.grid());
  double acc = 0.0;
  for (std::size_t x = 0; x < k.n_sites(); ++x)
    if (theta[x] != 0.0) acc += theta[x] * variational_derivative(k, theta, x);
  return acc * k.grid().spacing();
}

namespace {

GridField affine_argument(const ShiftFields& f, const GridField& theta) {
  GridField arg(theta.grid());
  for (std::size_t y = 0; y < arg.size(); ++y) arg[y] = f.a[y] * theta[y] + f.b[y];
  return arg;
}

GridField scaled_argument(const ShiftFields& f, const GridField& theta) {
  GridField arg(theta.grid());
  for (std::size_t y = 0; y < arg.size(); ++y) arg[y] = f.a[y] * theta[y];
  return arg;
}

// sum_x dx theta(x) B(a_x theta + b_x), optionally without its top theta-degree.
double birth_gf(const CorrelationHierarchy& k, const GridField& theta, const PairPotential& pot,
                GeneratorKind kind, bool project) {
  require_same_grid(k.grid(), theta.grid());
  require_same_grid(k.grid(), pot.grid());
  double acc = 0.0;
  for (std::size_t x = 0; x < k.n_sites(); ++x) {
    if (theta[x] == 0.0) continue;
    const auto f = shift_fields(pot, kind, x);
    double value = evaluate_gf(k, affine_argument(f, theta));
    if (project) value -= evaluate_gf_orders(k, scaled_argument(f, theta), k.n_max(), k.n_max());
    acc += theta[x] * value;
  }
  return acc * k.grid().spacing();
}

}  // namespace

double evaluate_birth_gf(const CorrelationHierarchy& k, const GridField& theta,
                         const PairPotential& pot, GeneratorKind kind) {
  return birth_gf(k, theta, pot, kind, false);
}

double evaluate_generator_gf_full(const CorrelationHierarchy& k, const GridField& theta,
                                  const ScaleParams& params, const PairPotential& pot,
                                  GeneratorKind kind) {
  return -evaluate_death_gf(k, theta) + params.z * birth_gf(k, theta, pot, kind, false);
}

double evaluate_generator_gf(const CorrelationHierarchy& k, const GridField& theta,
                             const ScaleParams& params, const PairPotential& pot,
                             GeneratorKind kind) {
  return -evaluate_death_gf(k, theta) + params.z * birth_gf(k, theta, pot, kind, true);
}

Eigen::MatrixXd assemble_matrix(const Grid& grid, std::size_t n_max, const ScaleParams& params,
                                const PairPotential& pot, GeneratorKind kind,
                                std::size_t max_entries) {
  const CorrelationHierarchy shape(grid, n_max, max_entries);
  const std::size_t dim = shape.flat_size();
  if (dim > max_entries / dim)
    raise(ErrorKind::memory_guard, "dense generator matrix exceeds the entry limit");
  Eigen::MatrixXd m(dim, dim);
  std::vector<double> e(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    const auto col = flatten(apply_generator(unflatten(grid, n_max, e), params, pot, kind));
    e[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return m;
}

double norm_bound_M(const ScaleParams& params, const PairPotential& pot) {
  params.validate();
  const double a0 = params.alpha0;
  return a0 * (1.0 + params.z * a0 * std::exp(pot.norm_l1() / params.alpha - 1.0));
}

double vlasov_gap_bound(double epsilon, const ScaleParams& params, const PairPotential& pot,
                        double alpha_prime, double alpha_dprime) {
  params.validate();
  if (!(epsilon >= 0.0)) raise(ErrorKind::invalid_argument, "epsilon must be non-negative");
  if (!(params.alpha <= alpha_prime && alpha_prime < alpha_dprime && alpha_dprime <= params.alpha0))
    raise(ErrorKind::invalid_argument, "need alpha <= alpha' < alpha'' <= alpha0");
  const double gap = alpha_dprime - alpha_prime;
  const double a0 = params.alpha0;
  const double l1 = pot.norm_l1();
  return epsilon * params.z * pot.norm_linf() * std::exp(l1 / params.alpha) *
         (l1 * a0 / gap + 4.0 * a0 * a0 * a0 / (gap * gap * std::exp(1.0)));
}

}  // namespace gfdyn
