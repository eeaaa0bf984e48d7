#include "doctest.h"

#include "roughtree/kdv.hpp"
#include "roughtree/numeric.hpp"

#include <cmath>

using namespace roughtree;

namespace {

const cplx I{0.0, 1.0};

// Direct double sum defining xdot, written independently of the library's loop.
cplx xdot_mode(double sigma, const SpectralState& p1, const SpectralState& p2, int k) {
  const int K = p1.K();
  cplx sum = 0.0;
  for (int k1 = -K; k1 <= K; ++k1) {
    const int k2 = k - k1;
    if (std::abs(k2) > K) continue;
    const double phase = double(k) * k * k - double(k1) * k1 * k1 - double(k2) * k2 * k2;
    sum += std::exp(-I * phase * sigma) * p1[k1] * p2[k2];
  }
  return 0.5 * I * double(k) * sum;
}

double max_gap(const SpectralState& a, const SpectralState& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("resonance phase factorises") {
  for (int k1 = -6; k1 <= 6; ++k1)
    for (int k2 = -6; k2 <= 6; ++k2) {
      const int k = k1 + k2;
      CHECK(k * k * k - k1 * k1 * k1 - k2 * k2 * k2 == 3 * k * k1 * k2);
    }
}

TEST_CASE("state storage and reality") {
  SpectralState v(4);
  v.set_mode(2, {1.0, -2.0});
  CHECK(v[-2] == cplx(1.0, 2.0));
  CHECK(v.reality_defect() == 0.0);
  v[3] = 1.0;
  CHECK(v.reality_defect() == doctest::Approx(1.0));
  CHECK(random_state(8, 3).reality_defect() == 0.0);
  CHECK(max_gap(random_state(8, 3), random_state(8, 3)) == 0.0);
  CHECK(smooth_state(4)[2] == cplx(0.125, -0.025));
  CHECK(h_norm_sq(smooth_state(4), 0.0) > 0.0);
}

TEST_CASE("xdot matches the defining sum") {
  const auto p1 = random_state(6, 1), p2 = random_state(6, 2);
  const auto x = xdot(0.37, p1, p2);
  for (int k = -6; k <= 6; ++k) CHECK(std::abs(x[k] - xdot_mode(0.37, p1, p2, k)) < 1e-13);
  CHECK(x[0] == cplx(0.0));
}

TEST_CASE("a single mode feeds only the doubled frequency") {
  SpectralState v(5);
  v.set_mode(1, 1.0);
  const auto x = xdot(0.2, v, v);
  for (int k = -5; k <= 5; ++k) {
    CAPTURE(k);
    if (std::abs(k) == 2) CHECK(std::abs(x[k]) > 0.1);
    else CHECK(std::abs(x[k]) < 1e-15);
  }
}

TEST_CASE("xdot is symmetric in its arguments") {
  const auto p1 = random_state(7, 4), p2 = random_state(7, 5);
  CHECK(max_gap(xdot(0.9, p1, p2), xdot(0.9, p2, p1)) < 1e-15);
  CHECK(max_gap(x_bullet(0.1, 0.3, p1, p2), x_bullet(0.1, 0.3, p2, p1)) < 1e-15);
}

TEST_CASE("x_bullet integrates xdot") {
  const auto p1 = random_state(6, 7), p2 = random_state(6, 8);
  const double s = 0.05, t = 0.3;
  // composite Simpson on xdot
  const int m = 4000;
  SpectralState acc(6);
  for (int j = 0; j <= m; ++j) {
    const double w = (j == 0 || j == m) ? 1 : (j % 2 ? 4 : 2);
    acc += cplx(w * (t - s) / (3.0 * m)) * xdot(s + (t - s) * j / m, p1, p2);
  }
  CHECK(max_gap(x_bullet(s, t, p1, p2), acc) < 1e-9);
}

TEST_CASE("closed-form second level agrees with quadrature") {
  const auto p1 = random_state(5, 11), p2 = random_state(5, 12), p3 = random_state(5, 13), p4 = random_state(5, 14);
  const double s = 0.2, t = 0.24;
  CHECK(max_gap(x_single(s, t, p1, p2, p3), x_single_quadrature(s, t, p1, p2, p3, 64)) < 1e-12);
  CHECK(max_gap(x_double(s, t, p1, p2, p3, p4), x_double_quadrature(s, t, p1, p2, p3, p4, 64)) < 1e-12);
  KdvQuadrature numeric;
  numeric.closed_form_max_K = 0;
  CHECK(max_gap(x_single(s, t, p1, p2, p3), x_single(s, t, p1, p2, p3, numeric)) < 1e-12);
}

TEST_CASE("algebraic relations of the operators") {
  const auto p1 = random_state(6, 21), p2 = random_state(6, 22), p3 = random_state(6, 23), p4 = random_state(6, 24);
  CHECK(single_relation_residual(p1, p2, p3, 0.0, 0.013, 0.031) < 1e-12);
  CHECK(double_relation_residual(p1, p2, p3, p4, 0.0, 0.013, 0.031) < 1e-12);
}

TEST_CASE("conservation identities") {
  const auto p1 = random_state(6, 31), p2 = random_state(6, 32), p3 = random_state(6, 33);
  CHECK(conservation1_residual(p1, p2, p3, 0.1, 0.14) < 1e-13);
  const auto p = random_state(6, 34);
  CHECK(conservation2_residual(p, 0.1, 0.14, kSingleTreeCoefficient) < 1e-13);
  CHECK(conservation2_residual(p, 0.1, 0.14, 1.0) > 1e-6);
}

TEST_CASE("tree step") {
  const auto v = smooth_state(8);
  SUBCASE("zero state is fixed") {
    const SpectralState z(8);
    CHECK(kdv_tree_step(z, 0.0, 0.01).max_abs() == 0.0);
  }
  SUBCASE("reality is preserved") { CHECK(kdv_tree_step(v, 0.0, 0.01).reality_defect() < 1e-15); }
  SUBCASE("step equals the three tree terms") {
    const auto w = kdv_tree_step(v, 0.1, 0.12);
    const auto ref = v + x_bullet(0.1, 0.12, v, v) + cplx(2.0) * x_single(0.1, 0.12, v, v, v);
    CHECK(max_gap(w, ref) < 1e-15);
  }
  CHECK_THROWS(kdv_tree_step(v, 0.0, 0.2));
}

TEST_CASE("RK4 reference is fourth order") {
  const auto v0 = smooth_state(6);
  const auto fine = rk4_reference(v0, 0.2, 400);
  const double e1 = max_gap(rk4_reference(v0, 0.2, 25), fine);
  const double e2 = max_gap(rk4_reference(v0, 0.2, 50), fine);
  CHECK(std::log2(e1 / e2) > 3.7);
}

TEST_CASE("tree solver converges at second order and conserves the mass norm") {
  const auto v0 = smooth_state(8);
  const auto ref = rk4_reference(v0, 0.1, 2000);
  const auto a = kdv_solve(v0, 0.1, 20), b = kdv_solve(v0, 0.1, 40);
  const double ea = max_gap(a.states.back(), ref), eb = max_gap(b.states.back(), ref);
  CHECK(std::log2(ea / eb) == doctest::Approx(2.0).epsilon(0.1));
  const double drift = std::abs(b.h0.back() - b.h0.front());
  CHECK(drift < 1e-6 * b.h0.front());
  CHECK(b.times.size() == 41);
  CHECK(b.states.back().reality_defect() < 1e-14);
}

TEST_CASE("single mode solution populates the doubled frequency") {
  SpectralState v(4);
  v.set_mode(1, 0.3);
  const auto traj = kdv_solve(v, 0.05, 5);
  CHECK(std::abs(traj.states.back()[2]) > 1e-4);
  CHECK(std::abs(traj.states.back()[4]) > 0.0);
}
