#include "roughtree/bseries.hpp"
#include "roughtree/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace roughtree {

std::vector<Tree> close_under_coproduct(std::vector<Tree> trees) {
  std::set<Tree> seen;
  std::vector<Tree> stack(trees.begin(), trees.end());
  while (!stack.empty()) {
    Tree t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    for (const auto& [pair, c] : reduced_coproduct(t))
      for (const Forest* f : {&pair.first, &pair.second})
        for (const auto& s : f->trees())
          if (!seen.count(s)) stack.push_back(s);
  }
  return {seen.begin(), seen.end()};  // canonical order puts lower weights first
}

namespace {

// Trees flattened for marching: children refer to earlier entries.
struct Plan {
  std::vector<Tree> trees;
  std::vector<std::uint32_t> label;
  std::vector<std::vector<std::size_t>> kids;
};

Plan make_plan(std::vector<Tree> trees, std::size_t d) {
  Plan plan;
  plan.trees = close_under_coproduct(std::move(trees));
  std::map<Tree, std::size_t> pos;
  for (std::size_t k = 0; k < plan.trees.size(); ++k) pos.emplace(plan.trees[k], k);
  for (const auto& t : plan.trees) {
    if (t.root().id >= d) throw std::invalid_argument("tree_integrals: label outside driver dimension");
    plan.label.push_back(t.root().id);
    std::vector<std::size_t> kids;
    for (const auto& c : t.children()) kids.push_back(pos.at(c));
    plan.kids.push_back(std::move(kids));
  }
  return plan;
}

// Advances V from fine point k to k + dir; cur holds values at k, next receives k + dir.
void march_step(const Plan& plan, const Inc1<double>& fine, std::size_t k, std::size_t k2,
                const std::vector<double>& cur, std::vector<double>& next, std::size_t start) {
  for (std::size_t q = 0; q < plan.trees.size(); ++q) {
    const std::uint32_t a = plan.label[q];
    const auto& kids = plan.kids[q];
    if (kids.empty()) {
      next[q] = fine(k2, a) - fine(start, a);
      continue;
    }
    double f0 = 1.0, f1 = 1.0;
    for (std::size_t c : kids) {
      f0 *= cur[c];
      f1 *= next[c];
    }
    next[q] = cur[q] + 0.5 * (f0 + f1) * (fine(k2, a) - fine(k, a));
  }
}

GridPtr coarse_grid(const Inc1<double>& fine, std::size_t oversample) {
  if (oversample < 1) throw std::invalid_argument("tree_integrals: oversample must be >= 1");
  const auto& fg = *fine.grid();
  if (fg.steps() % oversample != 0) throw std::invalid_argument("tree_integrals: fine steps not divisible by oversample");
  std::vector<double> t;
  for (std::size_t i = 0; i < fg.points(); i += oversample) t.push_back(fg[i]);
  return Grid::from_times(std::move(t));
}

}  // namespace

TreeIntegralMap tree_integrals(const Inc1<double>& fine, std::size_t oversample, std::vector<Tree> trees) {
  const GridPtr grid = coarse_grid(fine, oversample);
  const Plan plan = make_plan(std::move(trees), fine.dim());
  const std::size_t p = grid->points(), nt = plan.trees.size(), fp = fine.points();
  std::vector<Inc2<double>> vals;
  vals.reserve(nt);
  for (std::size_t q = 0; q < nt; ++q) vals.emplace_back(grid, 1);

  std::vector<double> cur(nt), next(nt);
  for (std::size_t s = 0; s < p; ++s) {
    const std::size_t S = s * oversample;
    // forward: t > s
    std::fill(cur.begin(), cur.end(), 0.0);
    for (std::size_t k = S; k + 1 < fp; ++k) {
      march_step(plan, fine, k, k + 1, cur, next, S);
      std::swap(cur, next);
      if ((k + 1) % oversample == 0)
        for (std::size_t q = 0; q < nt; ++q) vals[q]((k + 1) / oversample, s) = cur[q];
    }
    // backward: t < s
    std::fill(cur.begin(), cur.end(), 0.0);
    for (std::size_t k = S; k > 0; --k) {
      march_step(plan, fine, k, k - 1, cur, next, S);
      std::swap(cur, next);
      if ((k - 1) % oversample == 0)
        for (std::size_t q = 0; q < nt; ++q) vals[q]((k - 1) / oversample, s) = cur[q];
    }
  }
  TreeIntegralMap out{grid, fine.dim(), {}};
  for (std::size_t q = 0; q < nt; ++q) out.values.emplace(plan.trees[q], std::move(vals[q]));
  return out;
}

StepIntegrals step_tree_integrals(const Inc1<double>& fine, std::size_t oversample, std::vector<Tree> trees) {
  const GridPtr grid = coarse_grid(fine, oversample);
  const Plan plan = make_plan(std::move(trees), fine.dim());
  const std::size_t nt = plan.trees.size();
  StepIntegrals out{grid, plan.trees, {}};
  std::vector<double> cur(nt), next(nt);
  for (std::size_t s = 0; s < grid->steps(); ++s) {
    const std::size_t S = s * oversample;
    std::fill(cur.begin(), cur.end(), 0.0);
    for (std::size_t k = S; k < S + oversample; ++k) {
      march_step(plan, fine, k, k + 1, cur, next, S);
      std::swap(cur, next);
    }
    out.values.push_back(cur);
  }
  return out;
}

double identity_path_integral(const Tree& t, double ts, double s) {
  if (ts < s) throw std::invalid_argument("identity_path_integral: requires t >= s");
  return std::pow(ts - s, t.weight()) / tree_factorial(t).convert_to<double>();
}

double shuffle_reduction_residual(const TreeLevels& levels, const Word& u, const Word& v) {
  if (u.empty() || v.empty()) throw std::invalid_argument("shuffle_reduction_residual: empty word");
  auto lookup = [&](const Word& w) -> const Inc2<double>& {
    auto it = levels.find(linear_tree(w));
    if (it == levels.end()) throw std::invalid_argument("shuffle_reduction_residual: missing linear tree");
    return it->second;
  };
  const auto& Xu = lookup(u);
  const auto& Xv = lookup(v);
  std::vector<const Inc2<double>*> terms;
  for (const auto& w : shuffle(u, v)) terms.push_back(&lookup(w));
  double worst = 0.0;
  for (std::size_t i = 1; i < Xu.points(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double r = Xu(i, j) * Xv(i, j);
      for (const auto* w : terms) r -= (*w)(i, j);
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

std::vector<double> elementary_differential(const VectorFieldSet& f, const Tree& t, std::span<const double> xi) {
  const std::size_t n = f.input_dim();
  if (f.output_dim() != n || xi.size() != n) throw std::invalid_argument("elementary_differential: shape mismatch");
  if (t.root().id >= f.labels()) throw std::invalid_argument("elementary_differential: label outside field family");
  const auto kids = t.children();
  const std::size_t k = kids.size();
  if (static_cast<int>(k) > f.order())
    throw std::invalid_argument("elementary_differential: field lacks derivatives of order " + std::to_string(k));
  double combos = std::pow(static_cast<double>(n), static_cast<double>(k));
  if (combos > 1e4) throw ResourceLimitError("elementary_differential: n^k exceeds 1e4");

  std::vector<std::vector<double>> child;
  for (const auto& c : kids) child.push_back(elementary_differential(f, c, xi));
  std::vector<double> out(n, 0.0), buf(n);
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    double w = 1.0;
    for (std::size_t q = 0; q < k; ++q) w *= child[q][idx[q]];
    if (w != 0.0 || k == 0) {
      f.eval(t.root().id, idx, xi, buf);
      for (std::size_t c = 0; c < n; ++c) out[c] += w * buf[c];
    }
    std::size_t q = 0;
    while (q < k && ++idx[q] == n) idx[q++] = 0;
    if (q == k) break;
  }
  return out;
}

namespace {

void series_advance(const VectorFieldSet& f, const std::vector<Tree>& trees, const std::vector<double>& weights,
                    std::span<const double> step_values, std::vector<double>& y) {
  std::vector<double> inc(y.size(), 0.0);
  for (std::size_t q = 0; q < trees.size(); ++q) {
    const double x = step_values[q] * weights[q];
    if (x == 0.0) continue;
    const auto phi = elementary_differential(f, trees[q], y);
    for (std::size_t c = 0; c < y.size(); ++c) inc[c] += phi[c] * x;
  }
  for (std::size_t c = 0; c < y.size(); ++c) y[c] += inc[c];
}

}  // namespace

Inc1<double> series_solution(const VectorFieldSet& f, const Inc1<double>& fine, std::size_t oversample,
                             std::span<const double> y0, int max_weight) {
  const std::size_t n = f.input_dim();
  if (y0.size() != n || f.output_dim() != n) throw std::invalid_argument("series_solution: state dimension mismatch");
  if (f.labels() != fine.dim()) throw std::invalid_argument("series_solution: driver dimension mismatch");
  const auto trees = enumerate_trees(static_cast<std::uint32_t>(fine.dim()), max_weight);
  const auto steps = step_tree_integrals(fine, oversample, trees);
  std::vector<double> weights;
  for (const auto& t : steps.trees)
    weights.push_back(t.weight() <= max_weight ? 1.0 / symmetry_factor(t).convert_to<double>() : 0.0);
  Inc1<double> y(steps.grid, n);
  std::vector<double> cur(y0.begin(), y0.end());
  for (std::size_t c = 0; c < n; ++c) y(0, c) = cur[c];
  for (std::size_t i = 0; i < steps.values.size(); ++i) {
    series_advance(f, steps.trees, weights, steps.values[i], cur);
    for (double v : cur)
      if (!std::isfinite(v)) throw NonFiniteError("series_solution: non-finite state at step " + std::to_string(i + 1));
    for (std::size_t c = 0; c < n; ++c) y(i + 1, c) = cur[c];
  }
  return y;
}

std::vector<SeriesOrderRow> series_local_orders(const VectorFieldSet& f, const SmoothPath& x,
                                                std::span<const double> y0, const std::vector<int>& weights,
                                                const std::vector<double>& horizons, std::size_t fine_steps,
                                                const std::function<std::vector<double>(double)>& reference) {
  std::vector<SeriesOrderRow> rows;
  for (int w : weights) {
    SeriesOrderRow row{w, horizons, {}, 0.0};
    for (double h : horizons) {
      const auto fine = sample(x, Grid::uniform(fine_steps, h));
      const auto y = series_solution(f, fine, fine_steps, y0, w);
      const auto ref = reference(h);
      double err = 0.0;
      for (std::size_t c = 0; c < ref.size(); ++c) err = std::max(err, std::abs(y(1, c) - ref[c]));
      row.errors.push_back(err);
    }
    row.slope = loglog_slope(row.horizons, row.errors);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace roughtree
