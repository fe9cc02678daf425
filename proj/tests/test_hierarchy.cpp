#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gfdyn/hierarchy.hpp"
#include "support.hpp"

using namespace gfdyn;
using namespace testing;

TEST_CASE("scale params validation") {
  CHECK_NOTHROW(ScaleParams{}.validate());
  CHECK(thrown_kind([] { ScaleParams{0.5, 0.5, 1.0, 1.0}.validate(); }) ==
        kind_id(ErrorKind::invalid_argument));
  CHECK(thrown_kind([] { ScaleParams{0.0, 1.0, 1.0, 1.0}.validate(); }) ==
        kind_id(ErrorKind::invalid_argument));
  CHECK(thrown_kind([] { ScaleParams{0.5, 1.0, 0.0, 1.0}.validate(); }) ==
        kind_id(ErrorKind::invalid_argument));
  CHECK(thrown_kind([] { ScaleParams{0.5, 1.0, 1.0, -0.1}.validate(); }) ==
        kind_id(ErrorKind::invalid_argument));
}

TEST_CASE("memory guard") {
  CHECK(tensor_size(8, 3) == 512);
  CHECK(thrown_kind([] { CorrelationHierarchy(make_grid(100, 1.0), 4); }) ==
        kind_id(ErrorKind::memory_guard));
  CHECK(thrown_kind([] { CorrelationHierarchy(make_grid(4, 1.0), 3, 63); }) ==
        kind_id(ErrorKind::memory_guard));
  CHECK_NOTHROW(CorrelationHierarchy(make_grid(4, 1.0), 3, 64));
}

TEST_CASE("indexing") {
  CorrelationHierarchy k(make_grid(3, 3.0), 2);
  const std::vector<std::size_t> t{2, 1};
  k.at(t) = 4.0;
  CHECK(k.tensor(2)[2 * 3 + 1] == 4.0);
  const std::vector<std::size_t> bad{3, 0};
  CHECK(thrown_kind([&] { (void)k.at(bad); }) == kind_id(ErrorKind::index_out_of_range));
  const std::vector<std::size_t> longer{0, 0, 0};
  CHECK(thrown_kind([&] { (void)k.at(longer); }) == kind_id(ErrorKind::index_out_of_range));
  CHECK(k.flat_size() == 1 + 3 + 9);
}

TEST_CASE("exponential hierarchy") {
  const Grid g = make_grid(5, 2.5);
  const auto zero = exponential_hierarchy(GridField(g), 3);
  CHECK(zero.tensor(0)[0] == 1.0);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(tensor_max_abs(zero, n) == 0.0);

  const auto flat = exponential_hierarchy(GridField(g, 0.3), 2);
  const std::vector<std::size_t> t{1, 4};
  CHECK(flat.at(t) == doctest::Approx(0.09).epsilon(1e-15));

  Rng rng(9);
  const GridField rho = random_field(g, rng, 0.0, 2.0);
  const auto k = exponential_hierarchy(rho, 3);
  for (int i = 0; i < 20; ++i) {
    const std::vector<std::size_t> s{rng.next() % 5, rng.next() % 5, rng.next() % 5};
    CHECK(k.at(s) == doctest::Approx(rho[s[0]] * rho[s[1]] * rho[s[2]]).epsilon(1e-15));
  }
}

TEST_CASE("evaluate_gf examples") {
  const Grid g = make_grid(6, 3.0);
  Rng rng(1);
  const auto k = random_k(g, 3, rng);
  CHECK(evaluate_gf(k, GridField(g)) == k.tensor(0)[0]);

  const double c = 0.7, u = 0.4, L = 3.0;
  const auto e = exponential_hierarchy(GridField(g, c), 4);
  double series = 0.0;
  for (std::size_t n = 0; n <= 4; ++n) series += std::pow(c * u * L, n) / factorial(n);
  CHECK(evaluate_gf(e, GridField(g, u)) == doctest::Approx(series).epsilon(1e-14));

  const Grid small = make_grid(4, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_k(small, 2, rng);
    const GridField theta = random_field(small, rng, -1.0, 1.0);
    CHECK(rel_diff(evaluate_gf(r, theta), brute_gf(r, theta)) <= 1e-13);
  }
  CHECK(thrown_kind([&] { evaluate_gf(k, GridField(small)); }) == kind_id(ErrorKind::grid_mismatch));
}

TEST_CASE("evaluate_gf_orders splits the sum") {
  const Grid g = make_grid(4, 2.0);
  Rng rng(8);
  const auto k = random_k(g, 3, rng);
  const GridField theta = random_field(g, rng, -1.0, 1.0);
  for (std::size_t n = 0; n <= 3; ++n)
    CHECK(rel_diff(evaluate_gf_orders(k, theta, n, n), brute_gf_order(k, theta, n)) <= 1e-13);
  CHECK(evaluate_gf_orders(k, theta, 4, 9) == 0.0);
}

TEST_CASE("variational derivative") {
  const Grid g = make_grid(5, 2.5);
  Rng rng(21);
  const auto k = random_k(g, 3, rng);
  for (std::size_t x = 0; x < 5; ++x) CHECK(variational_derivative(k, GridField(g), x) == k.tensor(1)[x]);

  SUBCASE("exponential hierarchy up to the dropped top order") {
    const GridField rho = random_field(g, rng, 0.2, 1.0);
    const auto e = exponential_hierarchy(rho, 6);
    const GridField theta = random_field(g, rng, -0.1, 0.1);
    double s = 0.0;
    for (std::size_t y = 0; y < 5; ++y) s += rho[y] * theta[y] * g.spacing();
    const double tail = std::pow(std::abs(s), 6) / factorial(6);
    for (std::size_t x = 0; x < 5; ++x) {
      const double diff = std::abs(variational_derivative(e, theta, x) - evaluate_gf(e, theta) * rho[x]);
      CHECK(diff <= rho[x] * tail * (1 + 1e-6) + 1e-15);
    }
  }

  SUBCASE("central finite difference along a site indicator") {
    for (int trial = 0; trial < 10; ++trial) {
      const auto r = random_k(g, 3, rng);
      const GridField theta = random_field(g, rng, -0.5, 0.5);
      const double h = 1e-5;
      for (std::size_t x = 0; x < 5; ++x) {
        GridField up = theta, down = theta;
        up[x] += h;
        down[x] -= h;
        const double fd = (brute_gf(r, up) - brute_gf(r, down)) / (2 * h * g.spacing());
        CHECK(rel_diff(variational_derivative(r, theta, x), fd) <= 1e-8);
      }
    }
  }
}

TEST_CASE("substitute_affine") {
  const Grid g = make_grid(4, 2.0);
  Rng rng(33);
  const auto k = random_k(g, 3, rng);

  const auto same = substitute_affine(k, GridField(g, 1.0), GridField(g));
  CHECK(max_abs_difference(same, k) == 0.0);

  const GridField b = random_field(g, rng, -0.5, 0.5);
  const auto flat = substitute_affine(k, GridField(g), b);
  CHECK(flat.tensor(0)[0] == doctest::Approx(brute_gf(k, b)).epsilon(1e-14));
  for (std::size_t m = 1; m <= 3; ++m) CHECK(tensor_max_abs(flat, m) == 0.0);

  for (int trial = 0; trial < 5; ++trial) {
    const auto r = random_k(g, 2, rng);
    const GridField a = random_field(g, rng, -1.0, 1.0);
    const GridField c = random_field(g, rng, -1.0, 1.0);
    const auto s = substitute_affine(r, a, c);
    CHECK(is_symmetric(s, 1e-14));
    for (int i = 0; i < 10; ++i) {
      const GridField theta = random_field(g, rng, -1.0, 1.0);
      CHECK(rel_diff(evaluate_gf(s, theta), brute_gf(r, affine(a, theta, c))) <= 1e-10);
    }
  }

  const auto partial = substitute_affine(k, random_field(g, rng, -1, 1), b, 1);
  CHECK(tensor_max_abs(partial, 2) == 0.0);
  CHECK(tensor_max_abs(partial, 3) == 0.0);
}

TEST_CASE("taylor_coefficient_fd") {
  const Grid g = make_grid(4, 2.0);
  Rng rng(4);
  const GridField rho = random_field(g, rng, 0.1, 1.0);
  const auto e = exponential_hierarchy(rho, 3);
  for (std::size_t x = 0; x < 4; ++x) {
    const std::vector<std::size_t> s{x};
    CHECK(std::abs(taylor_coefficient_fd(e, s) - rho[x]) <= 1e-7);
  }
  const auto k = random_k(g, 3, rng);
  CHECK(taylor_coefficient_fd(k, std::vector<std::size_t>{}) == k.tensor(0)[0]);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) {
      const std::vector<std::size_t> s{x, y};
      CHECK(std::abs(taylor_coefficient_fd(k, s) - k.at(s)) <= 1e-6);
    }
  const std::vector<std::size_t> too_long{0, 1, 2, 3};
  CHECK(thrown_kind([&] { taylor_coefficient_fd(k, too_long); }) == kind_id(ErrorKind::invalid_argument));
}

TEST_CASE("property: finite differences reproduce every stored tensor") {
  Rng rng(404);
  for (int trial = 0; trial < 5; ++trial) {
    const Grid g = make_grid(3 + rng.next() % 2, rng.uniform(1.0, 3.0));
    const auto k = random_k(g, 3, rng);
    for (std::size_t n = 1; n <= 3; ++n)
      for_each_tuple(g.n_sites(), n, [&](const std::vector<std::size_t>& t) {
        CHECK(std::abs(taylor_coefficient_fd(k, t) - k.at(t)) <= 1e-6);
      });
  }
}

TEST_CASE("norm helpers against direct scans") {
  const Grid g = make_grid(5, 5.0);
  CorrelationHierarchy unit(g, 3);
  unit.tensor(0)[0] = 1.0;
  for (double a : {0.1, 1.0, 7.0}) CHECK(scale_norm(unit, a) == 1.0);
  CHECK(gf_upper_bound(unit, 2.0) == 1.0);

  const double c = 0.8;
  const auto e = exponential_hierarchy(GridField(g, c), 3);
  for (double a : {0.5, 1.0, 2.0})
    CHECK(scale_norm(e, a) == doctest::Approx(std::max(1.0, std::pow(a * c, 3))).epsilon(1e-15));
  CHECK(ruelle_margin(exponential_hierarchy(GridField(g, 0.6), 3), 0.6) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ruelle_margin(exponential_hierarchy(GridField(g, 0.3), 3), 0.6) == 1.0);
  double sum = 0.0;
  for (std::size_t n = 0; n <= 3; ++n) sum += std::pow(c * 1.5, n) / factorial(n);
  CHECK(gf_upper_bound(e, 1.5) == doctest::Approx(sum).epsilon(1e-15));

  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = random_k(g, 3, rng, 1.3);
    const double a = rng.uniform(0.1, 3.0);
    double sn = 0.0, rm = 0.0, ub = 0.0;
    for (std::size_t n = 0; n <= 3; ++n) {
      double mx = 0.0;
      for (double v : k.tensor(n)) mx = std::max(mx, std::abs(v));
      sn = std::max(sn, std::pow(a, n) * mx);
      rm = std::max(rm, mx / std::pow(0.7, n));
      ub += mx * std::pow(a, n) / factorial(n);
    }
    CHECK(scale_norm(k, a) == doctest::Approx(sn).epsilon(1e-14));
    CHECK(ruelle_margin(k, 0.7) == doctest::Approx(rm).epsilon(1e-14));
    CHECK(gf_upper_bound(k, a) == doctest::Approx(ub).epsilon(1e-14));
  }
}

TEST_CASE("cauchy estimate") {
  const Grid g = make_grid(4, 4.0);
  CorrelationHierarchy k(g, 1);
  k.tensor(0)[0] = 1.0;
  for (auto& v : k.tensor(1)) v = 1.0;
  CHECK(cauchy_estimate_check(k, 1, 1.0));
  CorrelationHierarchy zero(g, 3);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(cauchy_estimate_check(zero, n, 1.0));

  Rng rng(200);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_k(g, 3, rng, rng.uniform(0.1, 3.0));
    for (std::size_t n = 1; n <= 3; ++n)
      for (double rad : {0.5, 1.0, 2.0}) CHECK(cauchy_estimate_check(r, n, rad));
  }
}

TEST_CASE("linear-algebra plumbing") {
  const Grid g = make_grid(3, 1.5);
  Rng rng(7);
  const auto k1 = random_k(g, 3, rng);
  const auto k2 = random_k(g, 3, rng);
  const auto s = axpy(2.0, k1, k2);
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t i = 0; i < k1.tensor(n).size(); ++i)
      CHECK(s.tensor(n)[i] == 2.0 * k1.tensor(n)[i] + k2.tensor(n)[i]);

  const auto flat = flatten(k1);
  CHECK(flat.size() == k1.flat_size());
  CHECK(max_abs_difference(unflatten(g, 3, flat), k1) == 0.0);
  CHECK(thrown_kind([&] { unflatten(g, 2, flat); }) == kind_id(ErrorKind::invalid_argument));

  std::vector<double> raw(k1.flat_size());
  for (auto& v : raw) v = rng.uniform(-1, 1);
  const auto asym = unflatten(g, 3, raw);
  CHECK_FALSE(is_symmetric(asym));
  const auto sym = symmetrize(asym);
  CHECK(is_symmetric(sym, 1e-15));
  CHECK(max_abs_difference(symmetrize(sym), sym) <= 1e-15);

  CHECK(thrown_kind([&] { max_abs_difference(k1, CorrelationHierarchy(g, 2)); }) ==
        kind_id(ErrorKind::invalid_argument));
  CHECK(thrown_kind([&] { axpy(1.0, k1, CorrelationHierarchy(make_grid(3, 2.0), 3)); }) ==
        kind_id(ErrorKind::grid_mismatch));
}

TEST_CASE("snapshot round trip and parse errors") {
  const Grid g = make_grid(3, 1.7);
  Rng rng(99);
  const auto k = random_k(g, 3, rng);
  std::stringstream ss;
  write_snapshot(ss, k);
  const auto back = read_snapshot(ss);
  CHECK(back.grid() == g);
  CHECK(max_abs_difference(back, k) == 0.0);

  std::istringstream bad_header("n_sites,length\n3,1.7,2\n");
  CHECK(thrown_kind([&] { read_snapshot(bad_header); }) == kind_id(ErrorKind::parse_error));
  std::istringstream missing("n_sites,length,n_max\n2,1,1\n0,1\n1,0,0.5\n");
  CHECK(thrown_kind([&] { read_snapshot(missing); }) == kind_id(ErrorKind::parse_error));
  std::istringstream dup("n_sites,length,n_max\n2,1,1\n0,1\n1,0,0.5\n1,1,0.5\n1,1,0.5\n");
  CHECK(thrown_kind([&] { read_snapshot(dup); }) == kind_id(ErrorKind::parse_error));
  std::istringstream junk("n_sites,length,n_max\n2,1,1\n0,1\n1,0,x\n1,1,0.5\n");
  CHECK(thrown_kind([&] { read_snapshot(junk); }) == kind_id(ErrorKind::parse_error));
}

TEST_CASE("property: evaluate_gf is a polynomial of degree n_max along rays") {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n_max = 1 + rng.next() % 4;
    const Grid g = make_grid(3 + rng.next() % 3, rng.uniform(1.0, 4.0));
    const auto k = random_k(g, n_max, rng);
    const GridField theta = random_field(g, rng, -1.0, 1.0);
    auto at = [&](double s) {
      GridField t(g);
      for (std::size_t x = 0; x < t.size(); ++x) t[x] = s * theta[x];
      return evaluate_gf(k, t);
    };
    std::vector<double> nodes, vals;
    for (std::size_t j = 0; j <= n_max; ++j) {
      nodes.push_back(-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n_max));
      vals.push_back(at(nodes.back()));
    }
    const double s = rng.uniform(-1.5, 1.5);
    double interp = 0.0;
    for (std::size_t j = 0; j <= n_max; ++j) {
      double w = vals[j];
      for (std::size_t i = 0; i <= n_max; ++i)
        if (i != j) w *= (s - nodes[i]) / (nodes[j] - nodes[i]);
      interp += w;
    }
    CHECK(std::abs(interp - at(s)) <= 1e-9 * std::max(1.0, std::abs(at(s))));
  }
}

TEST_CASE("property: scale_norm is nondecreasing in alpha") {
  Rng rng(66);
  const Grid g = make_grid(4, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = random_k(g, 3, rng, rng.uniform(0.1, 4.0));
    const double a1 = rng.uniform(0.05, 3.0);
    const double a2 = a1 + rng.uniform(0.0, 3.0);
    CHECK(scale_norm(k, a1) <= scale_norm(k, a2));
    for (std::size_t n = 0; n <= 3; ++n)
      CHECK(std::pow(a1, n) * tensor_max_abs(k, n) <= std::pow(a2, n) * tensor_max_abs(k, n));
  }
}

TEST_CASE("property: hierarchy operations preserve symmetry") {
  Rng rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g = make_grid(3 + rng.next() % 3, 2.0);
    const auto k = random_k(g, 3, rng);
    CHECK(is_symmetric(k));
    CHECK(is_symmetric(exponential_hierarchy(random_field(g, rng, 0, 1), 3), 1e-15));
    CHECK(is_symmetric(axpy(rng.uniform(-1, 1), k, random_k(g, 3, rng)), 1e-15));
    CHECK(is_symmetric(substitute_affine(k, random_field(g, rng, -1, 1), random_field(g, rng, -1, 1)), 1e-14));
  }
}
