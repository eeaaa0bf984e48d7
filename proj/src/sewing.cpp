#include "roughtree/sewing.hpp"
#include "roughtree/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace roughtree {

namespace {

// P_i = sum_{m < i} a_{m+1, m}, per component.
std::vector<double> step_prefix(const Inc2<double>& a) {
  const std::size_t p = a.points(), dim = a.dim();
  std::vector<double> prefix(p * dim, 0.0);
  for (std::size_t i = 1; i < p; ++i)
    for (std::size_t c = 0; c < dim; ++c) prefix[i * dim + c] = prefix[(i - 1) * dim + c] + a(i, i - 1, c);
  return prefix;
}

void subtract_exact(Inc2<double>& a, const std::vector<double>& prefix) {
  const std::size_t p = a.points(), dim = a.dim();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t c = 0; c < dim; ++c) a(i, j, c) -= prefix[i * dim + c] - prefix[j * dim + c];
}

// Replace the finest-scale sums of an element with vanishing step sums by
// c * dt^mu, where c is fitted from h on each pair of adjacent steps.
void apply_local_estimate(Inc2<double>& out, const Inc3Fn& h, double mu) {
  const auto& g = *out.grid();
  const std::size_t n = g.steps(), dim = out.dim();
  if (n < 2) return;
  std::vector<double> prefix((n + 1) * dim, 0.0);
  std::vector<double> hv(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i + 1 < n ? i : i - 1;  // steps lo and lo+1
    const double d1 = g[lo + 1] - g[lo], d2 = g[lo + 2] - g[lo + 1];
    const double denom = std::pow(d1 + d2, mu) - std::pow(d1, mu) - std::pow(d2, mu);
    h(lo + 2, lo + 1, lo, hv);
    const double step = std::pow(g[i + 1] - g[i], mu);
    for (std::size_t c = 0; c < dim; ++c) {
      const double coef = denom != 0.0 ? hv[c] / denom : 0.0;
      prefix[(i + 1) * dim + c] = prefix[i * dim + c] + coef * step;
    }
  }
  const std::size_t p = n + 1;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t c = 0; c < dim; ++c) out(i, j, c) += prefix[i * dim + c] - prefix[j * dim + c];
}

}  // namespace

Inc2<double> sew_limit(const Inc2<double>& a) {
  Inc2<double> out(a.grid(), a.dim());
  const auto prefix = step_prefix(a);
  subtract_exact(out, prefix);
  out *= -1.0;
  return out;
}

ClosednessReport closedness(const GridPtr& grid, std::size_t dim, const Inc3Fn& h, const SewingOptions& opts) {
  ClosednessReport rep;
  const std::size_t p = grid->points();
  if (p < 4) return rep;
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, p - 1);
  std::array<std::vector<double>, 4> v;
  for (auto& x : v) x.resize(dim);
  std::vector<double> full(dim);
  for (std::size_t s = 0; s < opts.max_samples; ++s) {
    std::array<std::size_t, 4> idx{pick(rng), pick(rng), pick(rng), pick(rng)};
    std::sort(idx.begin(), idx.end(), std::greater<>());
    const auto [i, j, k, l] = idx;
    h(j, k, l, v[0]);
    h(i, k, l, v[1]);
    h(i, j, l, v[2]);
    h(i, j, k, v[3]);
    for (std::size_t c = 0; c < dim; ++c) {
      const double defect = -v[0][c] + v[1][c] - v[2][c] + v[3][c];
      rep.max_defect = std::max(rep.max_defect, std::abs(defect));
      for (const auto& x : v) rep.max_value = std::max(rep.max_value, std::abs(x[c]));
    }
    ++rep.samples;
  }
  return rep;
}

Inc2<double> lambda(const GridPtr& grid, std::size_t dim, const Inc3Fn& h, const SewingOptions& opts) {
  const auto rep = closedness(grid, dim, h, opts);
  if (rep.max_defect > opts.closed_tol * rep.max_value) {
    throw NotClosedError("lambda: 3-increment is not closed (defect " + std::to_string(rep.max_defect) +
                         ", scale " + std::to_string(rep.max_value) + ")");
  }
  // B_{ts} = -h_{t s t_0} has delta B = h by the cocycle identity.
  Inc2<double> out(grid, dim);
  const std::size_t p = grid->points();
  std::vector<double> hv(dim);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      h(i, j, 0, hv);
      for (std::size_t c = 0; c < dim; ++c) out(i, j, c) = -hv[c];
    }
  subtract_exact(out, step_prefix(out));
  if (opts.local_exponent) apply_local_estimate(out, h, *opts.local_exponent);
  return out;
}

Inc2<double> lambda(const Inc3<double>& h, const SewingOptions& opts) {
  const Inc3Fn fn = [&h](std::size_t i, std::size_t j, std::size_t k, std::span<double> out) {
    for (std::size_t c = 0; c < h.dim(); ++c) out[c] = h(i, j, k, c);
  };
  return lambda(h.grid(), h.dim(), fn, opts);
}

ExactSplit project_exact(const Inc2<double>& a) {
  Inc1<double> f(a.grid(), a.dim());
  const auto prefix = step_prefix(a);
  std::copy(prefix.begin(), prefix.end(), f.data().begin());
  Inc2<double> r = a;
  subtract_exact(r, prefix);
  return {std::move(f), std::move(r)};
}

}  // namespace roughtree
