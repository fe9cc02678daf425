#include "gfdyn/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "gfdyn/csv.hpp"
#include "gfdyn/error.hpp"

namespace gfdyn {

namespace {

double inverse_factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return 1.0 / f;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// out[i] = sum_j t[i * N + j] * v[j]
std::vector<double> contract_last(std::span<const double> t, std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(t.size() / n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* row = t.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

// Full contraction of an order-n tensor with v in every slot.
double contract_all(std::span<const double> t, std::span<const double> v, std::size_t order) {
  if (order == 0) return t[0];
  std::vector<double> cur = contract_last(t, v);
  for (std::size_t j = 1; j < order; ++j) cur = contract_last(cur, v);
  return cur[0];
}

std::vector<double> scaled_values(const GridField& f, double s) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= s;
  return v;
}

// prod_i f(y_i) for every tuple of the given order, row-major.
std::vector<double> product_tensor(std::span<const double> f, std::size_t order) {
  std::vector<double> p{1.0};
  for (std::size_t m = 0; m < order; ++m) {
    std::vector<double> next(p.size() * f.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = p[i] * f[j];
    p = std::move(next);
  }
  return p;
}

}  // namespace

void ScaleParams::validate() const {
  if (!(alpha > 0.0) || !(alpha < alpha0))
    raise(ErrorKind::invalid_argument, "scale indices need 0 < alpha < alpha0");
  if (!(z > 0.0)) raise(ErrorKind::invalid_argument, "activity z must be positive");
  if (!(epsilon >= 0.0)) raise(ErrorKind::invalid_argument, "epsilon must be non-negative");
}

std::size_t tensor_size(std::size_t n_sites, std::size_t order, std::size_t max_entries) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < order; ++i) {
    if (size > max_entries / n_sites) {
      std::ostringstream msg;
      msg << "tensor of order " << order << " on " << n_sites << " sites exceeds " << max_entries
          << " entries";
      raise(ErrorKind::memory_guard, msg.str());
    }
    size *= n_sites;
  }
  return size;
}

CorrelationHierarchy::CorrelationHierarchy(const Grid& grid, std::size_t n_max,
                                           std::size_t max_entries)
    : grid_(grid) {
  tensor_size(grid.n_sites(), n_max, max_entries);
  tensors_.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n)
    tensors_.emplace_back(ipow(grid.n_sites(), n), 0.0);
}

std::size_t CorrelationHierarchy::linear_index(std::span<const std::size_t> sites) const {
  if (sites.size() > n_max()) raise(ErrorKind::index_out_of_range, "tuple longer than n_max");
  std::size_t idx = 0;
  for (std::size_t s : sites) {
    if (s >= n_sites()) raise(ErrorKind::index_out_of_range, "site index out of range");
    idx = idx * n_sites() + s;
  }
  return idx;
}

double CorrelationHierarchy::at(std::span<const std::size_t> sites) const {
  return tensors_[sites.size()][linear_index(sites)];
}

double& CorrelationHierarchy::at(std::span<const std::size_t> sites) {
  return tensors_[sites.size()][linear_index(sites)];
}

std::size_t CorrelationHierarchy::flat_size() const noexcept {
  std::size_t s = 0;
  for (const auto& t : tensors_) s += t.size();
  return s;
}

CorrelationHierarchy exponential_hierarchy(const GridField& rho, std::size_t n_max,
                                           std::size_t max_entries) {
  CorrelationHierarchy k(rho.grid(), n_max, max_entries);
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto p = product_tensor(rho.values(), n);
    std::copy(p.begin(), p.end(), k.tensor(n).begin());
  }
  return k;
}

double evaluate_gf_orders(const CorrelationHierarchy& k, const GridField& theta, std::size_t lo,
                          std::size_t hi) {
  require_same_grid(k.grid(), theta.grid());
  hi = std::min(hi, k.n_max());
  const auto v = scaled_values(theta, k.grid().spacing());
  double sum = 0.0;
  for (std::size_t n = lo; n <= hi; ++n) sum += contract_all(k.tensor(n), v, n) * inverse_factorial(n);
  return sum;
}

double evaluate_gf(const CorrelationHierarchy& k, const GridField& theta) {
  return evaluate_gf_orders(k, theta, 0, k.n_max());
}

double variational_derivative(const CorrelationHierarchy& k, const GridField& theta,
                              std::size_t x) {
  require_same_grid(k.grid(), theta.grid());
  if (x >= k.n_sites()) raise(ErrorKind::index_out_of_range, "site index out of range");
  const auto v = scaled_values(theta, k.grid().spacing());
  double sum = 0.0;
  for (std::size_t n = 0; n < k.n_max(); ++n) {
    const auto t = k.tensor(n + 1);
    const std::size_t block = t.size() / k.n_sites();
    sum += contract_all(t.subspan(x * block, block), v, n) * inverse_factorial(n);
  }
  return sum;
}

CorrelationHierarchy substitute_affine(const CorrelationHierarchy& k, const GridField& a,
                                       const GridField& b) {
  return substitute_affine(k, a, b, k.n_max());
}

CorrelationHierarchy substitute_affine(const CorrelationHierarchy& k, const GridField& a,
                                       const GridField& b, std::size_t m_limit) {
  require_same_grid(k.grid(), a.grid());
  require_same_grid(k.grid(), b.grid());
  m_limit = std::min(m_limit, k.n_max());
  CorrelationHierarchy c(k.grid(), k.n_max());
  const auto bw = scaled_values(b, k.grid().spacing());

  // Contracting the trailing j slots of k^(n) with b dx feeds c^(n-j).
  for (std::size_t n = 0; n <= k.n_max(); ++n) {
    std::vector<double> t(k.tensor(n).begin(), k.tensor(n).end());
    for (std::size_t j = 0; j <= n; ++j) {
      const std::size_t m = n - j;
      if (m <= m_limit) {
        const double w = inverse_factorial(j);
        auto out = c.tensor(m);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * t[i];
      }
      if (j < n) t = contract_last(t, bw);
    }
  }

  for (std::size_t m = 1; m <= m_limit; ++m) {
    const auto p = product_tensor(a.values(), m);
    auto out = c.tensor(m);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= p[i];
  }
  return c;
}

double taylor_coefficient_fd(const CorrelationHierarchy& k, std::span<const std::size_t> sites,
                             double step) {
  const std::size_t n = sites.size();
  if (n > k.n_max()) raise(ErrorKind::invalid_argument, "order exceeds the truncation n_max");
  for (std::size_t s : sites)
    if (s >= k.n_sites()) raise(ErrorKind::index_out_of_range, "site index out of range");
  if (n == 0) return evaluate_gf(k, GridField(k.grid()));
  if (!(step > 0.0)) raise(ErrorKind::invalid_argument, "finite-difference step must be positive");

  // A difference stencil of order n annihilates every polynomial part of
  // degree below n, so those orders are left out of the evaluations; this
  // keeps the stencil values O(step^n) and the roundoff relative to them.
  auto stencil = [&](std::span<const std::size_t> tuple) {
    double acc = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      GridField theta(k.grid());
      double sign = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool plus = (mask >> i) & 1U;
        theta[tuple[i]] += plus ? step : -step;
        if (!plus) sign = -sign;
      }
      acc += sign * evaluate_gf_orders(k, theta, n, k.n_max());
    }
    return acc / std::pow(2.0 * step * k.grid().spacing(), static_cast<double>(n));
  };

  const double forward = stencil(sites);
  std::vector<std::size_t> reversed(sites.rbegin(), sites.rend());
  const double backward = stencil(reversed);
  if (std::abs(forward - backward) > 1e-6) {
    std::ostringstream msg;
    msg << "finite-difference estimate not symmetric (residual " << std::abs(forward - backward)
        << ")";
    raise(ErrorKind::precision_failure, msg.str());
  }
  return forward;
}

double tensor_max_abs(const CorrelationHierarchy& k, std::size_t n) {
  double m = 0.0;
  for (double v : k.tensor(n)) m = std::max(m, std::abs(v));
  return m;
}

double scale_norm(const CorrelationHierarchy& k, double alpha) {
  if (!(alpha > 0.0)) raise(ErrorKind::invalid_argument, "scale index alpha must be positive");
  double s = 0.0;
  for (std::size_t n = 0; n <= k.n_max(); ++n)
    s = std::max(s, std::pow(alpha, static_cast<double>(n)) * tensor_max_abs(k, n));
  return s;
}

double ruelle_margin(const CorrelationHierarchy& k, double z) {
  if (!(z > 0.0)) raise(ErrorKind::invalid_argument, "activity z must be positive");
  double s = 0.0;
  for (std::size_t n = 0; n <= k.n_max(); ++n)
    s = std::max(s, tensor_max_abs(k, n) / std::pow(z, static_cast<double>(n)));
  return s;
}

double gf_upper_bound(const CorrelationHierarchy& k, double r) {
  if (!(r > 0.0)) raise(ErrorKind::invalid_argument, "radius r must be positive");
  double s = 0.0;
  for (std::size_t n = 0; n <= k.n_max(); ++n)
    s += tensor_max_abs(k, n) * std::pow(r, static_cast<double>(n)) * inverse_factorial(n);
  return s;
}

bool cauchy_estimate_check(const CorrelationHierarchy& k, std::size_t n, double r) {
  if (n < 1 || n > k.n_max()) raise(ErrorKind::invalid_argument, "order must be in 1..n_max");
  const double sup = gf_upper_bound(k, r);
  const double lhs = tensor_max_abs(k, n);
  if (n == 1) return lhs <= sup / r;
  const double nf = 1.0 / inverse_factorial(n);
  return lhs <= nf * std::pow(std::exp(1.0) / r, static_cast<double>(n)) * sup;
}

void require_same_shape(const CorrelationHierarchy& k1, const CorrelationHierarchy& k2) {
  require_same_grid(k1.grid(), k2.grid());
  if (k1.n_max() != k2.n_max())
    raise(ErrorKind::invalid_argument, "hierarchies have different truncation orders");
}

CorrelationHierarchy axpy(double a, const CorrelationHierarchy& k1, const CorrelationHierarchy& k2) {
  require_same_shape(k1, k2);
  CorrelationHierarchy out = k2;
  for (std::size_t n = 0; n <= k1.n_max(); ++n) {
    auto o = out.tensor(n);
    auto x = k1.tensor(n);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += a * x[i];
  }
  return out;
}

std::vector<double> flatten(const CorrelationHierarchy& k) {
  std::vector<double> flat;
  flat.reserve(k.flat_size());
  for (std::size_t n = 0; n <= k.n_max(); ++n)
    flat.insert(flat.end(), k.tensor(n).begin(), k.tensor(n).end());
  return flat;
}

CorrelationHierarchy unflatten(const Grid& grid, std::size_t n_max, std::span<const double> flat) {
  CorrelationHierarchy k(grid, n_max);
  if (flat.size() != k.flat_size())
    raise(ErrorKind::invalid_argument, "flat vector size does not match hierarchy shape");
  std::size_t off = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto t = k.tensor(n);
    std::copy(flat.begin() + off, flat.begin() + off + t.size(), t.begin());
    off += t.size();
  }
  return k;
}

namespace {

std::vector<std::size_t> digits_of(std::size_t idx, std::size_t base, std::size_t order) {
  std::vector<std::size_t> d(order);
  for (std::size_t i = order; i-- > 0;) {
    d[i] = idx % base;
    idx /= base;
  }
  return d;
}

std::size_t index_of(std::span<const std::size_t> digits, std::size_t base) {
  std::size_t idx = 0;
  for (std::size_t d : digits) idx = idx * base + d;
  return idx;
}

}  // namespace

CorrelationHierarchy symmetrize(const CorrelationHierarchy& k) {
  CorrelationHierarchy out(k.grid(), k.n_max());
  const std::size_t base = k.n_sites();
  for (std::size_t n = 0; n <= k.n_max(); ++n) {
    const auto t = k.tensor(n);
    auto o = out.tensor(n);
    if (n < 2) {
      std::copy(t.begin(), t.end(), o.begin());
      continue;
    }
    // One average per multiset of sites, written to all of its arrangements,
    // so the result is symmetric bit for bit.
    std::vector<std::size_t> orbit;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      auto d = digits_of(idx, base, n);
      if (!std::is_sorted(d.begin(), d.end())) continue;
      orbit.clear();
      double acc = 0.0;
      do {
        orbit.push_back(index_of(d, base));
        acc += t[orbit.back()];
      } while (std::next_permutation(d.begin(), d.end()));
      const double mean = acc / static_cast<double>(orbit.size());
      for (std::size_t j : orbit) o[j] = mean;
    }
  }
  return out;
}

bool is_symmetric(const CorrelationHierarchy& k, double tol) {
  const std::size_t base = k.n_sites();
  for (std::size_t n = 2; n <= k.n_max(); ++n) {
    const auto t = k.tensor(n);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      auto d = digits_of(idx, base, n);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        std::swap(d[i], d[i + 1]);
        if (std::abs(t[index_of(d, base)] - t[idx]) > tol) return false;
        std::swap(d[i], d[i + 1]);
      }
    }
  }
  return true;
}

double max_abs_difference(const CorrelationHierarchy& k1, const CorrelationHierarchy& k2) {
  require_same_shape(k1, k2);
  double m = 0.0;
  for (std::size_t n = 0; n <= k1.n_max(); ++n) {
    auto a = k1.tensor(n);
    auto b = k2.tensor(n);
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

void write_snapshot(std::ostream& os, const CorrelationHierarchy& k) {
  os << "n_sites,length,n_max\n"
     << k.n_sites() << ',' << format_double(k.grid().length()) << ',' << k.n_max() << '\n';
  const std::size_t base = k.n_sites();
  for (std::size_t n = 0; n <= k.n_max(); ++n) {
    const auto t = k.tensor(n);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      os << n;
      for (std::size_t d : digits_of(idx, base, n)) os << ',' << d;
      os << ',' << format_double(t[idx]) << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(cur);
  return cells;
}

[[noreturn]] void snapshot_error(std::size_t line_no, const std::string& what) {
  std::ostringstream msg;
  msg << "snapshot line " << line_no << ": " << what;
  raise(ErrorKind::parse_error, msg.str());
}

std::size_t parse_index(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    snapshot_error(line_no, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size() || (!s.empty() && s[0] == '-'))
    snapshot_error(line_no, "expected an integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

CorrelationHierarchy read_snapshot(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != "n_sites,length,n_max") snapshot_error(line_no, "missing header");
  if (!next_line()) snapshot_error(line_no, "missing header values");
  const auto head = split_commas(line);
  if (head.size() != 3) snapshot_error(line_no, "header needs 3 values");
  const std::size_t n_sites = parse_index(head[0], line_no);
  double length = 0.0;
  if (!parse_double(head[1], length)) snapshot_error(line_no, "bad length");
  const std::size_t n_max = parse_index(head[2], line_no);

  CorrelationHierarchy k(make_grid(n_sites, length), n_max);
  std::vector<std::vector<bool>> seen;
  for (std::size_t n = 0; n <= n_max; ++n) seen.emplace_back(k.tensor(n).size(), false);

  while (next_line()) {
    const auto cells = split_commas(line);
    if (cells.size() < 2) snapshot_error(line_no, "entry needs an order and a value");
    const std::size_t n = parse_index(cells[0], line_no);
    if (n > n_max) snapshot_error(line_no, "order exceeds n_max");
    if (cells.size() != n + 2) snapshot_error(line_no, "wrong number of indices for the order");
    std::vector<std::size_t> sites(n);
    for (std::size_t i = 0; i < n; ++i) {
      sites[i] = parse_index(cells[i + 1], line_no);
      if (sites[i] >= n_sites) snapshot_error(line_no, "site index out of range");
    }
    double v = 0.0;
    if (!parse_double(cells.back(), v)) snapshot_error(line_no, "bad value '" + cells.back() + "'");
    const std::size_t idx = index_of(sites, n_sites);
    if (seen[n][idx]) snapshot_error(line_no, "duplicate entry");
    seen[n][idx] = true;
    k.tensor(n)[idx] = v;
  }
  for (std::size_t n = 0; n <= n_max; ++n)
    if (std::find(seen[n].begin(), seen[n].end(), false) != seen[n].end())
      snapshot_error(line_no, "snapshot is missing entries of order " + std::to_string(n));
  return k;
}

}  // namespace gfdyn
