#include "doctest.h"

#include "roughtree/fields.hpp"

#include <cmath>

using namespace roughtree;

TEST_CASE("polynomial evaluation and derivatives") {
  Polynomial p = Polynomial::monomial(3.0, {2, 1});  // 3 x^2 y
  p += Polynomial::constant(2, 2.0);
  const std::vector<double> x = {1.5, -2.0};
  CHECK(p(x) == doctest::Approx(3 * 2.25 * -2.0 + 2));
  CHECK(p.derivative(0)(x) == doctest::Approx(6 * 1.5 * -2.0));
  CHECK(p.derivative(1)(x) == doctest::Approx(3 * 2.25));
  CHECK(p.derivative(1).derivative(1)(x) == doctest::Approx(0.0));
  Polynomial q = Polynomial::constant(3, 1.0);
  CHECK_THROWS_AS(p += q, std::invalid_argument);
}

TEST_CASE("scalar polynomial field") {
  const auto f = scalar_polynomial_field({1.0, 0.0, 1.0});  // 1 + y^2
  const std::vector<double> y = {2.0};
  const std::vector<std::size_t> d1 = {0}, d2 = {0, 0}, d3 = {0, 0, 0};
  CHECK(f->value(0, y)[0] == 5.0);
  CHECK(f->derivative(0, d1, y)[0] == 4.0);
  CHECK(f->derivative(0, d2, y)[0] == 2.0);
  CHECK(f->derivative(0, d3, y)[0] == 0.0);
  CHECK(f->labels() == 1);
  CHECK(f->input_dim() == 1);
}

TEST_CASE("linear fields") {
  const auto f = linear_fields(2, {{1, 2, 3, 4}, {0, -1, 1, 0}});
  const std::vector<double> y = {0.5, -1.0};
  const auto v = f->value(0, y);
  CHECK(v[0] == doctest::Approx(0.5 - 2.0));
  CHECK(v[1] == doctest::Approx(1.5 - 4.0));
  const std::vector<std::size_t> b1 = {1};
  const auto col = f->derivative(1, b1, y);
  CHECK(col[0] == -1.0);
  CHECK(col[1] == 0.0);
  CHECK_THROWS_AS(linear_fields(2, {{1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("finite differences agree with exact derivatives") {
  const auto f = linear_fields(2, {{1, 2, 3, 4}});
  Polynomial p = Polynomial::monomial(1.0, {3, 0});
  p += Polynomial::monomial(-2.0, {1, 2});
  const PolynomialFieldFamily g(2, {{p, p.derivative(0)}});
  const std::vector<std::vector<double>> probes = {{0.3, -0.7}, {1.1, 0.4}};
  CHECK(finite_difference_gap(*f, probes) < 1e-8);
  CHECK(finite_difference_gap(g, probes, 3) < 1e-6);
  CHECK(mixed_partial_asymmetry(g, probes, 3) < 1e-12);
}

TEST_CASE("user-supplied fields") {
  // sin y with a deliberately wrong second derivative.
  const FunctionFieldFamily good(1, 1, 1, 2, [](std::size_t, std::span<const std::size_t> d, std::span<const double> x,
                                                std::span<double> out) {
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    const double vals[] = {s, c, -s};
    out[0] = vals[d.size()];
  });
  const FunctionFieldFamily bad(1, 1, 1, 2, [](std::size_t, std::span<const std::size_t> d, std::span<const double> x,
                                               std::span<double> out) {
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    const double vals[] = {s, c, s};
    out[0] = vals[d.size()];
  });
  const std::vector<std::vector<double>> probes = {{0.4}, {1.3}};
  CHECK(finite_difference_gap(good, probes) < 1e-8);
  CHECK(finite_difference_gap(bad, probes) > 0.1);
  const std::vector<std::size_t> d3 = {0, 0, 0};
  const std::vector<double> x = {0.1};
  CHECK_THROWS_AS(good.derivative(0, d3, x), std::domain_error);
}
