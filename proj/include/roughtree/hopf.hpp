#pragma once

#include "roughtree/trees.hpp"

#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace roughtree {

/// Finitely supported exact-rational combination of forests.
using ForestVector = std::map<Forest, Rational>;
/// Combination of (left, right) forest pairs; the codomain of the coproduct.
using TensorVector = std::map<std::pair<Forest, Forest>, Rational>;
using Word = std::vector<Label>;

/// Adds `c` to the coefficient of left (x) right, erasing it when it cancels.
void add_term(TensorVector& v, const Forest& left, const Forest& right, const Rational& c);
/// Product in the tensor-square algebra.
TensorVector multiply(const TensorVector& lhs, const TensorVector& rhs);

/// Connes-Kreimer coproduct. The left factor is the part containing the root
/// (a tree or 1), the right factor the forest of pruned branches.
TensorVector coproduct(const Tree& t);
TensorVector coproduct(const Forest& f);
/// Coproduct with 1 (x) f and f (x) 1 removed. Throws std::invalid_argument on the unit.
TensorVector reduced_coproduct(const Tree& t);
TensorVector reduced_coproduct(const Forest& f);

/// Coefficient of left (x) right in the coproduct (resp. reduced coproduct) of t.
BigInt counting(const Tree& t, const Forest& left, const Forest& right);
BigInt counting_reduced(const Tree& t, const Forest& left, const Forest& right);

/// Every interleaving of u and v preserving the internal orders, with multiplicity.
std::vector<Word> shuffle(const Word& u, const Word& v);

/// (a+b)^|t| minus the factorial-weighted expansion over the coproduct of t.
Rational tree_binomial_residual(const Tree& t, const Rational& a, const Rational& b);

/// Counit: 1 on the unit forest, 0 elsewhere.
Rational counit(const Forest& f);

struct HopfCheckReport {
  std::size_t forests = 0;
  std::size_t coassociativity_failures = 0;
  std::size_t counit_failures = 0;
  std::size_t grading_failures = 0;
  std::size_t binomial_failures = 0;
  std::vector<std::string> messages;

  bool ok() const {
    return coassociativity_failures + counit_failures + grading_failures + binomial_failures == 0;
  }
};

/// Exact check of coassociativity, both counit laws, grading and the tree
/// binomial identity over every forest of degree <= max_degree.
HopfCheckReport check_hopf_identities(std::uint32_t d, int max_degree,
                                      const std::vector<std::pair<Rational, Rational>>& binomial_points);

/// Growth weight: 1 when gamma*|t| <= 1, otherwise the normalised sum over the
/// reduced coproduct. Multiplicative on forests.
double q_gamma(const Tree& t, double gamma);
double q_gamma(const Forest& f, double gamma);

struct QGammaRow {
  Tree tree;
  double q = 0.0;
  double factorial = 0.0;
  double ratio = 0.0;  // q * factorial^gamma
};

/// One row per tree with gamma*|t| > 1; the base regime is left out.
std::vector<QGammaRow> q_gamma_report(std::uint32_t d, double gamma, int max_weight);

}  // namespace roughtree
