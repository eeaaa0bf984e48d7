#include "doctest.h"

#include "roughtree/branched.hpp"
#include "roughtree/bseries.hpp"

#include <cmath>

using namespace roughtree;

namespace {

const Label A{0}, B{1};

SmoothPath wave_path() {
  return {2, [](double t, std::span<double> o) {
            o[0] = std::sin(2 * t);
            o[1] = std::cos(3 * t) + t;
          }};
}

Tree node(Label a, std::vector<Tree> kids = {}) { return Tree::graft(a, std::move(kids)); }

// phi(x) = x0^2 x1 + x1^3 with its first and second derivatives.
double phi(double x0, double x1) { return x0 * x0 * x1 + x1 * x1 * x1; }
double dphi(std::size_t a, double x0, double x1) { return a == 0 ? 2 * x0 * x1 : x0 * x0 + 3 * x1 * x1; }
double ddphi(std::size_t a, std::size_t b, double x0, double x1) {
  if (a == 0 && b == 0) return 2 * x1;
  if (a == 1 && b == 1) return 6 * x1;
  return 2 * x0;
}

}  // namespace

TEST_CASE("levels from a rough path are multiplicative") {
  const auto X = lift_smooth(sample(wave_path(), Grid::uniform(40 * 4)), 2, 4, 0.4);
  const auto levels = branched_from_rough_path(X);
  CHECK(levels.size() == 2 + 4);
  for (const auto& [t, v] : levels) CHECK(multiplicative_residual(levels, t) < 1e-14);
  CHECK(levels.at(node(A, {leaf(B)}))(7, 3) == X.level2(7, 3, index2(2, 1, 0)));
}

TEST_CASE("extension builds every tree of weight 3 and 4 multiplicatively") {
  const auto X = lift_smooth(random_walk(Grid::uniform(48), 2, 11), 2, 1, 0.4);
  auto levels = branched_from_rough_path(X);
  BranchedOptions opts;
  opts.gamma = 0.4;
  for (const Tree& t : enumerate_trees(2, 4)) extend_branched(levels, t, opts);
  CHECK(levels.size() == enumerate_trees(2, 4).size());
  for (const Tree& t : enumerate_trees(2, 4)) {
    CAPTURE(to_string(t));
    CHECK(multiplicative_residual(levels, t) < 1e-10);
  }
}

TEST_CASE("extension without the local estimate is still multiplicative") {
  const auto X = lift_smooth(random_walk(Grid::uniform(32), 1, 12), 2, 1, 0.4);
  auto levels = branched_from_rough_path(X);
  BranchedOptions opts;
  opts.local_exponent_per_weight.reset();
  const Tree cherry = node(A, {leaf(A), leaf(A)});
  extend_branched(levels, cherry, opts);
  CHECK(multiplicative_residual(levels, cherry) < 1e-12);
}

TEST_CASE("extension reproduces smooth tree integrals") {
  const std::size_t n = 64, over = 16;
  const auto fine = sample(wave_path(), Grid::uniform(n * over));
  auto levels = branched_from_rough_path(lift_smooth(fine, 2, over, 0.4));
  BranchedOptions opts;
  const auto trees = enumerate_trees(2, 3);
  const auto direct = tree_integrals(fine, over, trees);
  for (const Tree& t : trees) {
    if (t.weight() < 3) continue;
    const auto& sewn = extend_branched(levels, t, opts);
    const auto& ref = direct.at(t);
    CAPTURE(to_string(t));
    CHECK((sewn - ref).max_abs() <= 1e-4 * ref.max_abs());
  }
}

TEST_CASE("a missing base level is an error") {
  TreeLevels levels;
  levels.emplace(leaf(A), Inc2<double>(Grid::uniform(4), 1));
  BranchedOptions opts;
  opts.gamma = 0.4;
  CHECK_THROWS_AS(extend_branched(levels, node(A, {leaf(A)}), opts), std::invalid_argument);
}

TEST_CASE("growth fit encloses the norms") {
  const auto X = lift_smooth(random_walk(Grid::uniform(32), 2, 13), 2, 1, 0.4);
  auto levels = branched_from_rough_path(X);
  BranchedOptions opts;
  for (const Tree& t : enumerate_trees(2, 3)) extend_branched(levels, t, opts);
  const auto fit = branched_growth_fit(levels, 0.4);
  CHECK(fit.rows.size() == levels.size());
  for (const auto& r : fit.rows) CHECK(r.norm <= fit.c1 * std::pow(fit.c2, r.tree.weight()) * r.q * (1 + 1e-9));
}

TEST_CASE("controlled paths") {
  const double gamma = 0.45;
  const auto grid = Grid::uniform(512);
  const auto X = lift_smooth(random_walk(grid, 2, 21), 2, 1, gamma);
  const auto levels = branched_from_rough_path(X);

  SUBCASE("a smooth function of the driver") {
    ControlledPath h{Inc1<double>(grid, 1), {}};
    for (std::size_t a = 0; a < 2; ++a) {
      h.coefficients.emplace(leaf(Label{std::uint32_t(a)}), Inc1<double>(grid, 1));
      for (std::size_t b = 0; b < 2; ++b) h.coefficients.emplace(node(Label{std::uint32_t(a)}, {leaf(Label{std::uint32_t(b)})}), Inc1<double>(grid, 1));
    }
    for (std::size_t i = 0; i <= 512; ++i) {
      const double x0 = X.x(i, 0), x1 = X.x(i, 1);
      h.path(i) = phi(x0, x1);
      for (std::size_t a = 0; a < 2; ++a) {
        h.coefficients.at(leaf(Label{std::uint32_t(a)}))(i) = dphi(a, x0, x1);
        for (std::size_t b = 0; b < 2; ++b)
          h.coefficients.at(node(Label{std::uint32_t(a)}, {leaf(Label{std::uint32_t(b)})}))(i) = ddphi(a, b, x0, x1);
      }
    }
    const auto rep = check_controlled(h, levels, gamma);
    CHECK(rep.main_ok);
    CHECK(rep.main.slope > 1.0);
    CHECK(rep.passed);
  }

  SUBCASE("an independent rough signal") {
    const auto other = random_walk(grid, 1, 99);
    ControlledPath h{Inc1<double>(grid, 1), {}};
    for (std::size_t i = 0; i <= 512; ++i) h.path(i) = other(i);
    const auto rep = check_controlled(h, levels, gamma);
    CHECK_FALSE(rep.main_ok);
    CHECK_FALSE(rep.passed);
  }

  SUBCASE("constant coefficients along tree integrals") {
    std::map<Tree, double> h0 = {{leaf(A), 1.5}, {node(B, {leaf(A)}), -0.5}};
    const auto h = controlled_from_constants(levels, h0, gamma);
    CHECK(h.coefficients.count(leaf(A)) == 1);
    CHECK(h.coefficients.count(leaf(B)) == 1);
    const auto rep = check_controlled(h, levels, gamma);
    CHECK(rep.main.max_value < 1e-12);
    CHECK(rep.passed);
    // h^{•_b}_s = -0.5 X^{•_a}_{s0} from the coproduct of [•_a]_b.
    CHECK(h.coefficients.at(leaf(B))(100) == doctest::Approx(-0.5 * levels.at(leaf(A))(100, 0)));
  }
}
