#pragma once

#include "roughtree/hopf.hpp"
#include "roughtree/increments.hpp"
#include "roughtree/roughpath.hpp"
#include "roughtree/sewing.hpp"

#include <map>
#include <optional>

namespace roughtree {

/// Scalar two-time values X^tau for a set of labelled trees.
using TreeLevels = std::map<Tree, Inc2<double>>;

/// Product of X^{sigma_i}_{t_i t_j} over the trees of a forest (1 for the unit).
double forest_value(const TreeLevels& levels, const Forest& f, std::size_t i, std::size_t j);

/// delta X^tau_{tus} minus sum' X^{left}_{tu} X^{right}_{us}, evaluated at one triple.
double multiplicative_defect(const TreeLevels& levels, const Tree& t, std::size_t i, std::size_t j, std::size_t k);

struct TripleSampling {
  /// Every ordered triple is visited when the grid has at most this many points.
  std::size_t exhaustive_points = 80;
  std::size_t samples = 20'000;
  std::uint64_t seed = 0x7ee5;
};
/// Largest |multiplicative_defect| over triples s < u < t (all dyadic triples plus samples on large grids).
double multiplicative_residual(const TreeLevels& levels, const Tree& t, const TripleSampling& sampling = {});

/// Trees •_a from level 1 and [•_b]_a from X^{ba} in level 2.
TreeLevels branched_from_rough_path(const RoughPath& X);

struct BranchedOptions {
  double gamma = 0.4;
  std::optional<double> local_exponent_per_weight = 1.0;
  SewingOptions sewing;
};

/// Builds X^target by sewing sum' X^{left} X^{right}, constructing missing
/// descendants with gamma |tau| > 1 recursively. Descendants with
/// gamma |tau| <= 1 must already be present (std::invalid_argument otherwise).
const Inc2<double>& extend_branched(TreeLevels& levels, const Tree& target, const BranchedOptions& opts);

/// ||X^tau||_{gamma |tau|} <= C1 C2^{|tau|} q_gamma(tau), fitted over the stored trees.
struct BranchedGrowthRow {
  Tree tree;
  double norm = 0.0;
  double q = 0.0;
};
struct BranchedGrowthFit {
  std::vector<BranchedGrowthRow> rows;
  double c1 = 0.0;
  double c2 = 0.0;
};
BranchedGrowthFit branched_growth_fit(const TreeLevels& levels, double gamma);

/// Path h with coefficient paths h^tau for the trees with gamma |tau| < 1.
struct ControlledPath {
  Inc1<double> path;
  std::map<Tree, Inc1<double>> coefficients;
};

/// h_t = sum h0^tau X^tau_{t t_0} and h^tau_s = sum c(rho, tau, sigma) h0^rho X^sigma_{s t_0}.
ControlledPath controlled_from_constants(const TreeLevels& levels, const std::map<Tree, double>& h0, double gamma);

struct ControlledReport {
  ScaleProfile main;
  std::map<Tree, ScaleProfile> derivatives;
  bool main_ok = false;
  std::map<Tree, bool> derivatives_ok;
  bool passed = false;
};

/// Scale profiles of delta h - sum h^tau X^tau and of
/// delta h^tau - sum c'(rho, tau, sigma) X^sigma h^rho. The first passes with
/// slope > 1, the one for tau with slope > 1 - gamma |tau|; a residual whose
/// maximum stays below `floor` passes outright.
ControlledReport check_controlled(const ControlledPath& h, const TreeLevels& levels, double gamma,
                                  double floor = 1e-12);

}  // namespace roughtree
