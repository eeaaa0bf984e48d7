#include "doctest.h"

#include "roughtree/roughpath.hpp"
#include "roughtree/numeric.hpp"

#include <cmath>

using namespace roughtree;

namespace {

SmoothPath poly_path() {
  return {2, [](double t, std::span<double> o) {
            o[0] = t;
            o[1] = t * t;
          }};
}

SmoothPath wave_path() {
  return {2, [](double t, std::span<double> o) {
            o[0] = std::sin(2 * t);
            o[1] = std::cos(3 * t) + t;
          }};
}

RoughPath lifted(const SmoothPath& x, std::size_t n, std::size_t over, int level, double gamma = 0.45) {
  return lift_smooth(sample(x, Grid::uniform(n * over)), level, over, gamma);
}

using Mat = std::vector<double>;  // 2 x 2 row-major

Mat mul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat expm(const Mat& m) {
  Mat out = {1, 0, 0, 1}, term = {1, 0, 0, 1};
  for (int k = 1; k < 40; ++k) {
    term = mul(term, m);
    for (auto& x : term) x /= k;
    for (int i = 0; i < 4; ++i) out[i] += term[i];
  }
  return out;
}

}  // namespace

TEST_CASE("level 2 of a polynomial path") {
  // X^{12}_{ts} = int (u - s) d(u^2), X^{21}_{ts} = int (u^2 - s^2) du.
  const auto X = lifted(poly_path(), 16, 64, 2);
  const auto& g = *X.grid;
  for (std::size_t i = 1; i <= 16; i += 3)
    for (std::size_t j = 0; j < i; j += 2) {
      const double t = g[i], s = g[j];
      const double x12 = 2 * ((t * t * t - s * s * s) / 3 - s * (t * t - s * s) / 2);
      const double x21 = (t * t * t - s * s * s) / 3 - s * s * (t - s);
      CHECK(X.level2(i, j, index2(2, 0, 1)) == doctest::Approx(x12).epsilon(1e-6));
      CHECK(X.level2(i, j, index2(2, 1, 0)) == doctest::Approx(x21).epsilon(1e-6));
      CHECK(X.level2(i, j, index2(2, 0, 0)) == doctest::Approx((t - s) * (t - s) / 2).epsilon(1e-12));
      CHECK(X.level1(i, j, 1) == doctest::Approx(t * t - s * s));
    }
  CHECK(X.x(16, 1) == doctest::Approx(1.0));
}

TEST_CASE("lift satisfies Chen exactly") {
  const auto X = lifted(wave_path(), 24, 8, 3);
  const auto chen = check_chen(X);
  CHECK(chen.level2 < 1e-14);
  REQUIRE(chen.level3.has_value());
  CHECK(*chen.level3 < 1e-14);
  const auto walk = lift_smooth(random_walk(Grid::uniform(40), 3, 9), 3, 1, 0.4);
  const auto chen_walk = check_chen(walk);
  CHECK(chen_walk.level2 < 1e-13);
  CHECK(*chen_walk.level3 < 1e-13);
}

TEST_CASE("lift converges to the smooth iterated integrals at second order") {
  const auto x12_err = [](std::size_t over) {
    const auto X = lifted(poly_path(), 4, over, 2);
    const double exact = 2.0 / 3.0;  // X^{12}_{1,0} = int 2u^2 du
    return std::abs(X.level2(4, 0, index2(2, 0, 1)) - exact);
  };
  const double e1 = x12_err(8), e2 = x12_err(16);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("lift arguments") {
  const auto fine = sample(poly_path(), Grid::uniform(10));
  CHECK_THROWS_AS(lift_smooth(fine, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(lift_smooth(fine, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(lift_smooth(fine, 2, 0), std::invalid_argument);
}

TEST_CASE("pure area rough path") {
  const auto X = pure_area(Grid::uniform(8), 2, {0, 0.5, -0.5, 0});
  CHECK(X.level1.max_abs() == 0.0);
  CHECK(X.level2(5, 1, 1) == doctest::Approx(0.5 * 0.5));
  CHECK(check_chen(X).level2 == 0.0);
  CHECK_THROWS_AS(pure_area(Grid::uniform(8), 2, {0, 0.5, 0.5, 0}), std::invalid_argument);
}

TEST_CASE("Ito shift moves the shuffle defect") {
  const auto X = lifted(wave_path(), 16, 8, 2);
  const auto Y = ito_shift(X, 0.3);
  const auto dx = shuffle_defect(X), dy = shuffle_defect(Y);
  CHECK(dx.max_abs() < 1e-12);
  const auto& g = *X.grid;
  for (std::size_t i = 0; i <= 16; ++i)
    for (std::size_t j = 0; j <= 16; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
          const double expected = a == b ? -2 * 0.3 * (g[i] - g[j]) : 0.0;
          CHECK(dy(i, j, a * 2 + b) - dx(i, j, a * 2 + b) == doctest::Approx(expected).epsilon(1e-12).scale(1));
        }
  CHECK(check_chen(Y).level2 < 1e-14);
}

TEST_CASE("rough integral is linear and reacts to the Ito shift by the explicit term") {
  const auto X = lifted(wave_path(), 32, 8, 2, 0.45);
  Polynomial p1 = Polynomial::monomial(1.0, {2, 0}), p2 = Polynomial::monomial(1.0, {1, 1});
  const PolynomialFieldFamily phi1(2, {{p1}, {p2}});
  const PolynomialFieldFamily phi2(2, {{Polynomial::monomial(2.0, {0, 1})}, {Polynomial::monomial(-1.0, {0, 3})}});
  Polynomial c1 = p1, c2 = p2;
  c1 += Polynomial::monomial(3.0 * 2.0, {0, 1});
  c2 += Polynomial::monomial(3.0 * -1.0, {0, 3});
  const PolynomialFieldFamily combo(2, {{c1}, {c2}});
  const auto I1 = rough_integral(phi1, X), I2 = rough_integral(phi2, X), I = rough_integral(combo, X);
  for (std::size_t i = 0; i <= 32; ++i) CHECK(I.f(i) == doctest::Approx(I1.f(i) + 3.0 * I2.f(i)).epsilon(1e-10));

  // level2 += c delta_{ab} (t - s) adds c sum_a d_a phi_a(x_s) (t - s) per step.
  const double c = 0.25;
  const auto J = rough_integral(phi1, ito_shift(X, c));
  const auto& g = *X.grid;
  double correction = 0.0;
  for (std::size_t i = 0; i < 32; ++i) {
    const std::vector<double> xs = {X.x(i, 0), X.x(i, 1)};
    const std::vector<std::size_t> d0 = {0}, d1 = {1};
    correction += c * (phi1.derivative(0, d0, xs)[0] + phi1.derivative(1, d1, xs)[0]) * (g[i + 1] - g[i]);
  }
  CHECK(J.f(32) - I1.f(32) == doctest::Approx(correction).epsilon(1e-8));
}

TEST_CASE("rough integral of an exact form") {
  // phi = grad(x0^2 x1) integrates to the increment of x0^2 x1 up to the scheme order.
  const PolynomialFieldFamily phi(2, {{Polynomial::monomial(2.0, {1, 1})}, {Polynomial::monomial(1.0, {2, 0})}});
  const auto err = [&](std::size_t n) {
    const auto X = lifted(wave_path(), n, 8, 2, 0.45);
    const double F1 = X.x(n, 0) * X.x(n, 0) * X.x(n, 1), F0 = X.x(0, 0) * X.x(0, 0) * X.x(0, 1);
    return std::abs(rough_integral(phi, X).f(n) - (F1 - F0));
  };
  CHECK(err(128) < 1e-3);
  CHECK(err(64) / err(128) > 3.0);
}

TEST_CASE("rough integral requires gamma above one third") {
  const auto X = lifted(poly_path(), 8, 2, 2, 0.3);
  const PolynomialFieldFamily phi(2, {{Polynomial::constant(2, 1.0)}, {Polynomial::constant(2, 1.0)}});
  CHECK_THROWS_AS(rough_integral(phi, X), std::domain_error);
}

TEST_CASE("level 3 by sewing") {
  // Identity path: X^{111}_{1,0} = 1/6.
  const auto id = lift_smooth(sample({1, [](double t, std::span<double> o) { o[0] = t; }}, Grid::uniform(512)), 2, 1, 0.4);
  const auto ext = extend_level3(id);
  CHECK((*ext.level3)(512, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(check_chen(ext).level3.value() < 1e-13);
  // A smooth 2d path against the quadrature lift.
  const auto direct = lifted(wave_path(), 64, 16, 3, 0.4);
  RoughPath two = direct;
  two.level3.reset();
  const auto sewn = extend_level3(two);
  const double rel = (*sewn.level3 - *direct.level3).max_abs() / direct.level3->max_abs();
  CHECK(rel < 1e-4);
  CHECK(check_chen(sewn).level3.value() < 1e-13);
  two.gamma = 0.3;
  CHECK_THROWS_AS(extend_level3(two), std::domain_error);
}

TEST_CASE("growth fit bounds every level") {
  const auto X = lift_smooth(random_walk(Grid::uniform(32), 2, 4), 3, 1, 0.4);
  const auto fit = growth_fit(X);
  REQUIRE(fit.norms.size() == 3);
  double fact = 1;
  for (int n = 1; n <= 3; ++n) {
    fact *= n;
    CHECK(fit.norms[n - 1] <= fit.c1 * std::pow(fit.c2, n) / std::pow(fact, 0.4) * (1 + 1e-12));
  }
}

TEST_CASE("second-order step for y' = y") {
  const auto f = scalar_polynomial_field({0.0, 1.0});
  const std::vector<double> y0 = {1.0};
  auto err = [&](std::size_t n) {
    const auto X = lift_smooth(sample({1, [](double t, std::span<double> o) { o[0] = t; }}, Grid::uniform(n)), 2, 1);
    return std::abs(rde_solve(*f, X, y0)(n) - std::exp(1.0));
  };
  const double e64 = err(64), e128 = err(128);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.02));
  // (1 + h + h^2 / 2)^N for N = 4 by hand.
  CHECK(err(4) == doctest::Approx(std::exp(1.0) - std::pow(1 + 0.25 + 0.03125, 4)).epsilon(1e-12));
}

TEST_CASE("zero field keeps the state") {
  const auto f = scalar_polynomial_field({0.0});
  const auto X = lift_smooth(random_walk(Grid::uniform(16), 1, 2), 2, 1, 0.4);
  const std::vector<double> y0 = {0.7};
  const auto y = rde_solve(*f, X, y0);
  for (std::size_t i = 0; i <= 16; ++i) CHECK(y(i) == 0.7);
}

TEST_CASE("Picard form agrees with the step form") {
  const auto f = linear_fields(2, {{0, 1, -1, 0}, {0.5, 0, 0, -0.2}});
  const auto X = lifted(wave_path(), 32, 4, 2, 0.45);
  const std::vector<double> y0 = {1.0, 0.5};
  const auto y = rde_solve(*f, X, y0);
  const auto pic = rde_solve_picard(*f, X, y0);
  for (std::size_t i = 0; i <= 32; ++i)
    for (std::size_t c = 0; c < 2; ++c) CHECK(pic.y(i, c) == doctest::Approx(y(i, c)).epsilon(1e-12));
  CHECK(pic.iterations <= 33);
}

TEST_CASE("pure area drives the bracket flow") {
  // y' = M y with M = sum_{a,c} A^{ca} F_a F_c.
  const std::vector<double> F0 = {0, 1, 0, 0}, F1 = {0, 0, 1, 0};
  const auto f = linear_fields(2, {F0, F1});
  const std::vector<double> area = {0, 0.8, -0.8, 0};
  Mat M = {0, 0, 0, 0};
  const std::vector<Mat> F = {F0, F1};
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t c = 0; c < 2; ++c) {
      const Mat prod = mul(F[a], F[c]);
      for (int k = 0; k < 4; ++k) M[k] += area[c * 2 + a] * prod[k];
    }
  const Mat E = expm(M);
  const std::vector<double> y0 = {1.0, -0.5};
  const std::vector<double> exact = {E[0] * y0[0] + E[1] * y0[1], E[2] * y0[0] + E[3] * y0[1]};
  std::vector<double> errs;
  for (std::size_t n : {64, 128, 256}) {
    const auto y = rde_solve(*f, pure_area(Grid::uniform(n), 2, area), y0);
    errs.push_back(std::hypot(y(n, 0) - exact[0], y(n, 1) - exact[1]));
  }
  CHECK(errs[2] < 5e-3);
  CHECK(errs[0] / errs[1] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(errs[1] / errs[2] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("blow-up aborts") {
  const auto f = scalar_polynomial_field({0.0, 0.0, 1.0});
  const auto X = lift_smooth(sample({1, [](double t, std::span<double> o) { o[0] = 4 * t; }}, Grid::uniform(64)), 2, 1);
  const std::vector<double> y0 = {2.0};
  CHECK_THROWS_AS(rde_solve(*f, X, y0), NonFiniteError);
}
