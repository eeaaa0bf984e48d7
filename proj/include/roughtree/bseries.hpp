#pragma once

#include "roughtree/branched.hpp"
#include "roughtree/fields.hpp"
#include "roughtree/hopf.hpp"
#include "roughtree/roughpath.hpp"

#include <functional>
#include <vector>

namespace roughtree {

/// Iterated integrals X^tau of a smooth driver, keyed by tree.
struct TreeIntegralMap {
  GridPtr grid;
  std::size_t d = 1;
  TreeLevels values;

  const Inc2<double>& at(const Tree& t) const { return values.at(t); }
};

/// Adds every tree appearing in a reduced-coproduct term, recursively; sorted.
std::vector<Tree> close_under_coproduct(std::vector<Tree> trees);

/// X^{[t1 ... tn]_a}_{ts} = int_s^t X^{t1}_{us} ... X^{tn}_{us} dx^a_u by
/// trapezoid sums on the fine grid, for both orientations of (t, s).
TreeIntegralMap tree_integrals(const Inc1<double>& fine, std::size_t oversample, std::vector<Tree> trees);

/// The same integrals over consecutive coarse steps only: values[i][k] is
/// X^{trees[k]} over step i.
struct StepIntegrals {
  GridPtr grid;
  std::vector<Tree> trees;
  std::vector<std::vector<double>> values;
};
StepIntegrals step_tree_integrals(const Inc1<double>& fine, std::size_t oversample, std::vector<Tree> trees);

/// (t - s)^|tau| / tau!
double identity_path_integral(const Tree& t, double ts, double s);

/// Largest |X^u X^v - sum over shuffles w of X^w| over pairs s < t, using linear trees.
double shuffle_reduction_residual(const TreeLevels& levels, const Word& u, const Word& v);

/// phi(•_a) = f_a, phi([t1 ... tk]_a) = sum f_{a; b1 ... bk} prod phi(t_i)^{b_i}.
std::vector<double> elementary_differential(const VectorFieldSet& f, const Tree& t, std::span<const double> xi);

/// Stepwise truncated B-series: y_{i+1} = y_i + sum_{|tau| <= max_weight} phi(tau)(y_i) X^tau / sigma(tau).
Inc1<double> series_solution(const VectorFieldSet& f, const Inc1<double>& fine, std::size_t oversample,
                             std::span<const double> y0, int max_weight);

struct SeriesOrderRow {
  int max_weight = 0;
  std::vector<double> horizons;
  std::vector<double> errors;
  double slope = 0.0;
};
/// One-step local error against `reference(h)` (the exact y(h)) for each weight and horizon.
std::vector<SeriesOrderRow> series_local_orders(const VectorFieldSet& f, const SmoothPath& x,
                                                std::span<const double> y0, const std::vector<int>& weights,
                                                const std::vector<double>& horizons, std::size_t fine_steps,
                                                const std::function<std::vector<double>(double)>& reference);

}  // namespace roughtree
