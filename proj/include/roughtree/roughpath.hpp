#pragma once

#include "roughtree/fields.hpp"
#include "roughtree/increments.hpp"
#include "roughtree/sewing.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace roughtree {

/// Analytic driver t -> x(t) in R^dim.
struct SmoothPath {
  std::size_t dim = 1;
  std::function<void(double t, std::span<double> out)> eval;
};

Inc1<double> sample(const SmoothPath& x, const GridPtr& grid);

/// Seeded Gaussian random walk with increments of variance scale^2 * dt, started at 0.
Inc1<double> random_walk(const GridPtr& grid, std::size_t dim, std::uint64_t seed, double scale = 1.0);

// Component layout. X^{a1 a2} integrates a1 innermost:
//   X^{a1 a2}_{ts} = int_s^t (x^{a1}_u - x^{a1}_s) dx^{a2}_u,
// stored at a1 * d + a2; X^{a1 a2 a3} at (a1 * d + a2) * d + a3. Chen reads
//   delta X^{a1 a2}_{tus}    = X^{a2}_{tu} X^{a1}_{us},
//   delta X^{a1 a2 a3}_{tus} = X^{a3}_{tu} X^{a1 a2}_{us} + X^{a2 a3}_{tu} X^{a1}_{us}.
inline std::size_t index2(std::size_t d, std::size_t a1, std::size_t a2) { return a1 * d + a2; }
inline std::size_t index3(std::size_t d, std::size_t a1, std::size_t a2, std::size_t a3) {
  return (a1 * d + a2) * d + a3;
}

struct RoughPath {
  GridPtr grid;
  std::size_t d = 1;
  double gamma = 0.5;
  std::vector<double> start;  // x at t_0
  Inc2<double> level1;
  Inc2<double> level2;
  std::optional<Inc2<double>> level3;

  /// Path value x_{t_i} = start + X^a_{t_i t_0}.
  double x(std::size_t i, std::size_t a) const { return start[a] + level1(i, 0, a); }
};

/// Iterated integrals of the piecewise-linear interpolation of `fine`, with
/// trapezoid sums on the fine grid, restricted to every oversample-th point.
/// Levels 2 and 3 satisfy Chen exactly up to rounding.
RoughPath lift_smooth(const Inc1<double>& fine, int level, std::size_t oversample, double gamma = 0.5);

/// level1 = 0 and level2_{ts} = A (t - s) with A antisymmetric (row-major d x d).
RoughPath pure_area(const GridPtr& grid, std::size_t d, const std::vector<double>& area, double gamma = 0.4);

struct ChenReport {
  double level2 = 0.0;
  std::optional<double> level3;
};
/// Largest Chen defect over ordered triples s < u < t.
ChenReport check_chen(const RoughPath& X);

/// level2^{ab} += c * delta_{ab} * (t - s).
RoughPath ito_shift(const RoughPath& X, double c);

/// X^a X^b - X^{ab} - X^{ba}, stored at a * d + b.
Inc2<double> shuffle_defect(const RoughPath& X);

struct RoughIntegral {
  Inc1<double> f;             // integral path, f_0 = 0
  Inc2<double> r;             // a - delta f
  ScaleProfile obstruction;   // decay of delta a across dyadic triples
  double remainder_norm = 0;  // Hoelder norm of r at exponent 3 gamma
};

/// Integral of phi_a(x) dx^a with the second-order compensated germ
/// a_{ts} = phi_a(x_s) X^a_{ts} + d_b phi_a(x_s) X^{ba}_{ts}. Requires gamma > 1/3.
RoughIntegral rough_integral(const OneForm& phi, const RoughPath& X);

struct ExtensionOptions {
  /// Exponent of the finest-scale estimate as a multiple of the tree weight;
  /// nullopt keeps the bare sewing map on the grid.
  std::optional<double> local_exponent_per_weight = 1.0;
  SewingOptions sewing;
};

/// Adds level 3 as the sewing of X^{a3} X^{a1 a2} + X^{a2 a3} X^{a1}. Requires 3 gamma > 1.
RoughPath extend_level3(const RoughPath& X, const ExtensionOptions& opts = {});

/// Fit of ||X^{level n}||_{n gamma} <= C1 C2^n / (n!)^gamma over available levels.
struct GrowthFit {
  std::vector<double> norms;
  double c1 = 0.0;
  double c2 = 0.0;
  double max_log_residual = 0.0;
};
GrowthFit growth_fit(const RoughPath& X);

/// Second-order step y += f_a(y) X^a + d_b f_a(y) f^b_c(y) X^{ca}.
Inc1<double> rde_solve(const VectorFieldSet& f, const RoughPath& X, std::span<const double> y0);

struct PicardResult {
  Inc1<double> y;
  std::size_t iterations = 0;
  double last_change = 0.0;
};
/// Fixed point of y_t = y_0 + sum of the same germ over the finest partition.
/// max_iterations = 0 means grid steps + 1, which is always enough.
PicardResult rde_solve_picard(const VectorFieldSet& f, const RoughPath& X, std::span<const double> y0,
                              std::size_t max_iterations = 0, double tol = 0.0);

}  // namespace roughtree
