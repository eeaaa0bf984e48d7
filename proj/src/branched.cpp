#include "roughtree/branched.hpp"
#include "roughtree/numeric.hpp"

#include <cmath>
#include <random>
#include <set>

namespace roughtree {

namespace {

const Inc2<double>& level_of(const TreeLevels& levels, const Tree& t) {
  auto it = levels.find(t);
  if (it == levels.end()) throw std::invalid_argument("missing level for " + to_string(t));
  return it->second;
}

}  // namespace

double forest_value(const TreeLevels& levels, const Forest& f, std::size_t i, std::size_t j) {
  double v = 1.0;
  for (const auto& t : f.trees()) v *= level_of(levels, t)(i, j);
  return v;
}

double multiplicative_defect(const TreeLevels& levels, const Tree& t, std::size_t i, std::size_t j, std::size_t k) {
  const auto& X = level_of(levels, t);
  double v = X(i, k) - X(i, j) - X(j, k);
  for (const auto& [pair, c] : reduced_coproduct(t))
    v -= to_double(c) * forest_value(levels, pair.first, i, j) * forest_value(levels, pair.second, j, k);
  return v;
}

double multiplicative_residual(const TreeLevels& levels, const Tree& t, const TripleSampling& sampling) {
  const auto& X = level_of(levels, t);
  const std::size_t p = X.points();
  // Resolve coproduct terms once.
  struct Term {
    double c;
    std::vector<const Inc2<double>*> left, right;
  };
  std::vector<Term> terms;
  for (const auto& [pair, c] : reduced_coproduct(t)) {
    Term term{to_double(c), {}, {}};
    for (const auto& s : pair.first.trees()) term.left.push_back(&level_of(levels, s));
    for (const auto& s : pair.second.trees()) term.right.push_back(&level_of(levels, s));
    terms.push_back(std::move(term));
  }
  auto defect = [&](std::size_t i, std::size_t j, std::size_t k) {
    double v = X(i, k) - X(i, j) - X(j, k);
    for (const auto& term : terms) {
      double l = term.c;
      for (const auto* s : term.left) l *= (*s)(i, j);
      for (const auto* s : term.right) l *= (*s)(j, k);
      v -= l;
    }
    return std::abs(v);
  };
  double worst = 0.0;
  if (p <= sampling.exhaustive_points) {
    for (std::size_t i = 2; i < p; ++i)
      for (std::size_t j = 1; j < i; ++j)
        for (std::size_t k = 0; k < j; ++k) worst = std::max(worst, defect(i, j, k));
    return worst;
  }
  const std::size_t n = p - 1;
  for (std::size_t l = 1; 2 * l <= n; l *= 2)
    for (std::size_t s = 0; s + 2 * l <= n; ++s) worst = std::max(worst, defect(s + 2 * l, s + l, s));
  std::mt19937_64 rng(sampling.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n);
  for (std::size_t q = 0; q < sampling.samples; ++q) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    if (a == b || b == c || a == c) continue;
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);
    worst = std::max(worst, defect(a, b, c));
  }
  return worst;
}

TreeLevels branched_from_rough_path(const RoughPath& X) {
  TreeLevels out;
  const std::size_t d = X.d, p = X.grid->points();
  for (std::size_t a = 0; a < d; ++a) {
    Inc2<double> v(X.grid, 1);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) v(i, j) = X.level1(i, j, a);
    out.emplace(leaf(Label{static_cast<std::uint32_t>(a)}), std::move(v));
  }
  if (X.level2.dim() == d * d) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        Inc2<double> v(X.grid, 1);
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < p; ++j) v(i, j) = X.level2(i, j, index2(d, b, a));
        const Label word[2] = {Label{static_cast<std::uint32_t>(b)}, Label{static_cast<std::uint32_t>(a)}};
        out.emplace(linear_tree(word), std::move(v));
      }
  }
  return out;
}

const Inc2<double>& extend_branched(TreeLevels& levels, const Tree& target, const BranchedOptions& opts) {
  if (auto it = levels.find(target); it != levels.end()) return it->second;
  if (!(opts.gamma * target.weight() > 1.0))
    throw std::invalid_argument("extend_branched: missing given level " + to_string(target));
  const auto cop = reduced_coproduct(target);
  for (const auto& [pair, c] : cop)
    for (const Forest* f : {&pair.first, &pair.second})
      for (const auto& t : f->trees()) extend_branched(levels, t, opts);
  if (levels.empty()) throw std::invalid_argument("extend_branched: no levels given");
  const GridPtr grid = levels.begin()->second.grid();

  struct Term {
    double c;
    std::vector<const Inc2<double>*> left, right;
  };
  std::vector<Term> terms;
  for (const auto& [pair, c] : cop) {
    Term term{to_double(c), {}, {}};
    for (const auto& s : pair.first.trees()) term.left.push_back(&levels.at(s));
    for (const auto& s : pair.second.trees()) term.right.push_back(&levels.at(s));
    terms.push_back(std::move(term));
  }
  const Inc3Fn h = [&terms](std::size_t i, std::size_t j, std::size_t k, std::span<double> out) {
    double v = 0.0;
    for (const auto& term : terms) {
      double l = term.c;
      for (const auto* s : term.left) l *= (*s)(i, j);
      for (const auto* s : term.right) l *= (*s)(j, k);
      v += l;
    }
    out[0] = v;
  };
  SewingOptions sew = opts.sewing;
  if (opts.local_exponent_per_weight) sew.local_exponent = *opts.local_exponent_per_weight * target.weight();
  auto value = lambda(grid, 1, h, sew);
  return levels.emplace(target, std::move(value)).first->second;
}

BranchedGrowthFit branched_growth_fit(const TreeLevels& levels, double gamma) {
  BranchedGrowthFit fit;
  std::vector<double> w, y;
  for (const auto& [t, X] : levels) {
    BranchedGrowthRow row{t, holder_norm(X, gamma * t.weight()), q_gamma(t, gamma)};
    if (row.norm > 0.0) {
      w.push_back(t.weight());
      y.push_back(std::log(row.norm / row.q));
    }
    fit.rows.push_back(std::move(row));
  }
  std::set<double> distinct(w.begin(), w.end());
  if (distinct.size() >= 2) {
    const auto line = fit_line(w, y);
    double lift = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) lift = std::max(lift, y[k] - line.intercept - line.slope * w[k]);
    fit.c1 = std::exp(line.intercept + lift);
    fit.c2 = std::exp(line.slope);
  } else if (!y.empty()) {
    fit.c1 = std::exp(*std::max_element(y.begin(), y.end()));
    fit.c2 = 1.0;
  }
  return fit;
}

ControlledPath controlled_from_constants(const TreeLevels& levels, const std::map<Tree, double>& h0, double gamma) {
  if (levels.empty()) throw std::invalid_argument("controlled_from_constants: no levels");
  const GridPtr grid = levels.begin()->second.grid();
  const std::size_t p = grid->points();
  ControlledPath out{Inc1<double>(grid, 1), {}};
  for (const auto& [rho, c0] : h0) {
    const auto& X = level_of(levels, rho);
    for (std::size_t i = 0; i < p; ++i) out.path(i) += c0 * X(i, 0);
  }
  for (const auto& [rho, c0] : h0) {
    for (const auto& [pair, c] : coproduct(rho)) {
      if (pair.first.size() != 1) continue;
      const Tree& tau = pair.first.trees()[0];
      if (!(gamma * tau.weight() < 1.0)) continue;
      auto [it, fresh] = out.coefficients.try_emplace(tau, grid, 1);
      for (std::size_t i = 0; i < p; ++i) it->second(i) += c0 * to_double(c) * forest_value(levels, pair.second, i, 0);
    }
  }
  return out;
}

ControlledReport check_controlled(const ControlledPath& h, const TreeLevels& levels, double gamma, double floor) {
  const auto& grid = *h.path.grid();
  ControlledReport rep;
  std::vector<std::pair<const Inc1<double>*, const Inc2<double>*>> first_order;
  for (const auto& [tau, coef] : h.coefficients) {
    if (!(gamma * tau.weight() < 1.0)) continue;
    first_order.emplace_back(&coef, &level_of(levels, tau));
  }
  rep.main = pair_scale_profile(grid, [&](std::size_t t, std::size_t s) {
    double v = h.path(t) - h.path(s);
    for (const auto& [coef, X] : first_order) v -= (*coef)(s) * (*X)(t, s);
    return std::abs(v);
  });
  rep.main_ok = rep.main.slope > 1.0 || rep.main.max_value <= floor;
  rep.passed = rep.main_ok;

  for (const auto& [tau, coef] : h.coefficients) {
    if (!(gamma * tau.weight() < 1.0)) continue;
    // Terms c'(rho, tau, sigma) X^sigma h^rho over the supplied rho.
    struct Term {
      double c;
      const Inc1<double>* h_rho;
      Forest sigma;
    };
    std::vector<Term> terms;
    for (const auto& [rho, h_rho] : h.coefficients) {
      if (!(gamma * rho.weight() < 1.0) || rho.weight() <= tau.weight()) continue;
      for (const auto& [pair, c] : reduced_coproduct(rho))
        if (pair.first == Forest(tau)) terms.push_back({to_double(c), &h_rho, pair.second});
    }
    const auto prof = pair_scale_profile(grid, [&](std::size_t t, std::size_t s) {
      double v = coef(t) - coef(s);
      for (const auto& term : terms) v -= term.c * forest_value(levels, term.sigma, t, s) * (*term.h_rho)(s);
      return std::abs(v);
    });
    const bool ok = prof.slope > 1.0 - gamma * tau.weight() || prof.max_value <= floor;
    rep.derivatives.emplace(tau, prof);
    rep.derivatives_ok.emplace(tau, ok);
    rep.passed = rep.passed && ok;
  }
  return rep;
}

}  // namespace roughtree
