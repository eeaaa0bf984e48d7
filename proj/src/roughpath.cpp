#include "roughtree/roughpath.hpp"
#include "roughtree/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace roughtree {

Inc1<double> sample(const SmoothPath& x, const GridPtr& grid) {
  Inc1<double> out(grid, x.dim);
  std::vector<double> v(x.dim);
  for (std::size_t i = 0; i < grid->points(); ++i) {
    x.eval((*grid)[i], v);
    for (std::size_t c = 0; c < x.dim; ++c) out(i, c) = v[c];
  }
  return out;
}

Inc1<double> random_walk(const GridPtr& grid, std::size_t dim, std::uint64_t seed, double scale) {
  Inc1<double> out(grid, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 1; i < grid->points(); ++i) {
    const double sd = scale * std::sqrt((*grid)[i] - (*grid)[i - 1]);
    for (std::size_t c = 0; c < dim; ++c) out(i, c) = out(i - 1, c) + sd * normal(rng);
  }
  return out;
}

RoughPath lift_smooth(const Inc1<double>& fine, int level, std::size_t oversample, double gamma) {
  if (oversample < 1) throw std::invalid_argument("lift_smooth: oversample must be >= 1");
  if (level < 1 || level > 3) throw std::invalid_argument("lift_smooth: level must be 1, 2 or 3");
  const auto& fg = *fine.grid();
  if (fg.steps() % oversample != 0) throw std::invalid_argument("lift_smooth: fine steps not divisible by oversample");
  const std::size_t d = fine.dim();
  const std::size_t n = fg.steps() / oversample, p = n + 1, fp = fg.points();

  std::vector<double> coarse_times(p);
  for (std::size_t i = 0; i < p; ++i) coarse_times[i] = fg[i * oversample];
  auto grid = Grid::from_times(std::move(coarse_times));

  // J[ab](k) = sum_{m<k} (x^a_m + x^a_{m+1})/2 (x^b_{m+1} - x^b_m): exact for the linear interpolant.
  std::vector<double> J(fp * d * d, 0.0);
  for (std::size_t m = 0; m + 1 < fp; ++m)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        J[(m + 1) * d * d + a * d + b] =
            J[m * d * d + a * d + b] + 0.5 * (fine(m, a) + fine(m + 1, a)) * (fine(m + 1, b) - fine(m, b));
  std::vector<double> K;
  if (level >= 3) {
    K.assign(fp * d * d * d, 0.0);
    const std::size_t d3 = d * d * d;
    for (std::size_t m = 0; m + 1 < fp; ++m)
      for (std::size_t ab = 0; ab < d * d; ++ab)
        for (std::size_t c = 0; c < d; ++c)
          K[(m + 1) * d3 + ab * d + c] = K[m * d3 + ab * d + c] + 0.5 * (J[m * d * d + ab] + J[(m + 1) * d * d + ab]) *
                                                                    (fine(m + 1, c) - fine(m, c));
  }

  RoughPath X{grid, d, gamma, {}, Inc2<double>(grid, d), Inc2<double>(grid, level >= 2 ? d * d : 0), std::nullopt};
  X.start.assign(fine.value(0).begin(), fine.value(0).end());
  auto xs = [&](std::size_t i, std::size_t a) { return fine(i * oversample, a); };
  auto Jc = [&](std::size_t i, std::size_t a, std::size_t b) { return J[i * oversample * d * d + a * d + b]; };
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t a = 0; a < d; ++a) X.level1(i, j, a) = xs(i, a) - xs(j, a);
  if (level >= 2) {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        if (i == j) continue;
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b)
            X.level2(i, j, index2(d, a, b)) = Jc(i, a, b) - Jc(j, a, b) - xs(j, a) * (xs(i, b) - xs(j, b));
      }
  }
  if (level >= 3) {
    Inc2<double> l3(grid, d * d * d);
    const std::size_t d3 = d * d * d;
    auto Kc = [&](std::size_t i, std::size_t a, std::size_t b, std::size_t c) {
      return K[i * oversample * d3 + (a * d + b) * d + c];
    };
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        if (i == j) continue;
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c) {
              const double dc = xs(i, c) - xs(j, c);
              l3(i, j, index3(d, a, b, c)) = Kc(i, a, b, c) - Kc(j, a, b, c) - Jc(j, a, b) * dc -
                                             xs(j, a) * (Jc(i, b, c) - Jc(j, b, c)) + xs(j, a) * xs(j, b) * dc;
            }
      }
    X.level3 = std::move(l3);
  }
  return X;
}

RoughPath pure_area(const GridPtr& grid, std::size_t d, const std::vector<double>& area, double gamma) {
  if (area.size() != d * d) throw std::invalid_argument("pure_area: area must be d x d");
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (std::abs(area[a * d + b] + area[b * d + a]) > 1e-15)
        throw std::invalid_argument("pure_area: area must be antisymmetric");
  RoughPath X{grid, d, gamma, std::vector<double>(d, 0.0), Inc2<double>(grid, d), Inc2<double>(grid, d * d), std::nullopt};
  const auto& g = *grid;
  for (std::size_t i = 0; i < g.points(); ++i)
    for (std::size_t j = 0; j < g.points(); ++j)
      for (std::size_t c = 0; c < d * d; ++c) X.level2(i, j, c) = area[c] * (g[i] - g[j]);
  return X;
}

ChenReport check_chen(const RoughPath& X) {
  ChenReport rep;
  const std::size_t p = X.grid->points(), d = X.d;
  for (std::size_t i = 2; i < p; ++i)
    for (std::size_t j = 1; j < i; ++j)
      for (std::size_t k = 0; k < j; ++k)
        for (std::size_t a1 = 0; a1 < d; ++a1)
          for (std::size_t a2 = 0; a2 < d; ++a2) {
            const std::size_t c = index2(d, a1, a2);
            const double lhs = X.level2(i, k, c) - X.level2(i, j, c) - X.level2(j, k, c);
            rep.level2 = std::max(rep.level2, std::abs(lhs - X.level1(i, j, a2) * X.level1(j, k, a1)));
          }
  if (X.level3) {
    const auto& L3 = *X.level3;
    double worst = 0.0;
    for (std::size_t i = 2; i < p; ++i)
      for (std::size_t j = 1; j < i; ++j)
        for (std::size_t k = 0; k < j; ++k)
          for (std::size_t a1 = 0; a1 < d; ++a1)
            for (std::size_t a2 = 0; a2 < d; ++a2)
              for (std::size_t a3 = 0; a3 < d; ++a3) {
                const std::size_t c = index3(d, a1, a2, a3);
                const double lhs = L3(i, k, c) - L3(i, j, c) - L3(j, k, c);
                const double rhs = X.level1(i, j, a3) * X.level2(j, k, index2(d, a1, a2)) +
                                   X.level2(i, j, index2(d, a2, a3)) * X.level1(j, k, a1);
                worst = std::max(worst, std::abs(lhs - rhs));
              }
    rep.level3 = worst;
  }
  return rep;
}

RoughPath ito_shift(const RoughPath& X, double c) {
  RoughPath Y = X;
  const auto& g = *X.grid;
  for (std::size_t i = 0; i < g.points(); ++i)
    for (std::size_t j = 0; j < g.points(); ++j)
      for (std::size_t a = 0; a < X.d; ++a) Y.level2(i, j, index2(X.d, a, a)) += c * (g[i] - g[j]);
  return Y;
}

Inc2<double> shuffle_defect(const RoughPath& X) {
  const std::size_t d = X.d, p = X.grid->points();
  Inc2<double> out(X.grid, d * d);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          out(i, j, a * d + b) = X.level1(i, j, a) * X.level1(i, j, b) - X.level2(i, j, index2(d, a, b)) -
                                 X.level2(i, j, index2(d, b, a));
  return out;
}

namespace {

void check_field_shape(const FieldFamily& f, std::size_t in, std::size_t labels, int order, const char* who) {
  if (f.input_dim() != in || f.labels() != labels)
    throw std::invalid_argument(std::string(who) + ": field shape does not match the driver");
  if (f.order() < order) throw std::invalid_argument(std::string(who) + ": field lacks derivatives of order " + std::to_string(order));
}

}  // namespace

RoughIntegral rough_integral(const OneForm& phi, const RoughPath& X) {
  if (!(X.gamma > 1.0 / 3.0)) throw std::domain_error("rough_integral: requires gamma > 1/3");
  const std::size_t d = X.d, p = X.grid->points();
  check_field_shape(phi, d, d, 1, "rough_integral");
  const std::size_t m = phi.output_dim();

  // Germ coefficients at every grid point: phi_a(x_s) and d_b phi_a(x_s).
  std::vector<double> val(p * d * m), der(p * d * d * m);
  std::vector<double> xs(d), buf(m);
  for (std::size_t s = 0; s < p; ++s) {
    for (std::size_t a = 0; a < d; ++a) xs[a] = X.x(s, a);
    for (std::size_t a = 0; a < d; ++a) {
      phi.eval(a, {}, xs, buf);
      std::copy(buf.begin(), buf.end(), val.begin() + static_cast<std::ptrdiff_t>((s * d + a) * m));
      for (std::size_t b = 0; b < d; ++b) {
        const std::size_t part[1] = {b};
        phi.eval(a, part, xs, buf);
        std::copy(buf.begin(), buf.end(), der.begin() + static_cast<std::ptrdiff_t>(((s * d + a) * d + b) * m));
      }
    }
  }
  Inc2<double> germ(X.grid, m);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      for (std::size_t a = 0; a < d; ++a) {
        const double x1 = X.level1(i, j, a);
        for (std::size_t c = 0; c < m; ++c) germ(i, j, c) += val[(j * d + a) * m + c] * x1;
        for (std::size_t b = 0; b < d; ++b) {
          const double x2 = X.level2(i, j, index2(d, b, a));
          for (std::size_t c = 0; c < m; ++c) germ(i, j, c) += der[((j * d + a) * d + b) * m + c] * x2;
        }
      }
    }

  auto split = project_exact(germ);
  RoughIntegral out{std::move(split.f), std::move(split.r), {}, 0.0};
  out.obstruction = triple_scale_profile(*X.grid, [&](std::size_t i, std::size_t j, std::size_t k) {
    double s = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const double v = germ(i, k, c) - germ(i, j, c) - germ(j, k, c);
      s += v * v;
    }
    return std::sqrt(s);
  });
  out.remainder_norm = holder_norm(out.r, 3.0 * X.gamma);
  return out;
}

RoughPath extend_level3(const RoughPath& X, const ExtensionOptions& opts) {
  if (!(3.0 * X.gamma > 1.0)) throw std::domain_error("extend_level3: requires 3 gamma > 1");
  const std::size_t d = X.d;
  const Inc3Fn h = [&X, d](std::size_t i, std::size_t j, std::size_t k, std::span<double> out) {
    for (std::size_t a1 = 0; a1 < d; ++a1)
      for (std::size_t a2 = 0; a2 < d; ++a2)
        for (std::size_t a3 = 0; a3 < d; ++a3)
          out[index3(d, a1, a2, a3)] = X.level1(i, j, a3) * X.level2(j, k, index2(d, a1, a2)) +
                                       X.level2(i, j, index2(d, a2, a3)) * X.level1(j, k, a1);
  };
  SewingOptions sew = opts.sewing;
  if (opts.local_exponent_per_weight) sew.local_exponent = 3.0 * *opts.local_exponent_per_weight;
  RoughPath Y = X;
  Y.level3 = lambda(X.grid, d * d * d, h, sew);
  return Y;
}

GrowthFit growth_fit(const RoughPath& X) {
  GrowthFit fit;
  fit.norms.push_back(holder_norm(X.level1, X.gamma));
  fit.norms.push_back(holder_norm(X.level2, 2.0 * X.gamma));
  if (X.level3) fit.norms.push_back(holder_norm(*X.level3, 3.0 * X.gamma));
  std::vector<double> n, y;
  double fact = 1.0;
  for (std::size_t k = 0; k < fit.norms.size(); ++k) {
    fact *= static_cast<double>(k + 1);
    if (fit.norms[k] <= 0.0) continue;
    n.push_back(static_cast<double>(k + 1));
    y.push_back(std::log(fit.norms[k] * std::pow(fact, X.gamma)));
  }
  if (n.size() >= 2) {
    const auto line = fit_line(n, y);
    // Shift the intercept so the bound holds at every level.
    double lift = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) lift = std::max(lift, y[k] - line.intercept - line.slope * n[k]);
    fit.c1 = std::exp(line.intercept + lift);
    fit.c2 = std::exp(line.slope);
    fit.max_log_residual = line.max_residual;
  } else if (n.size() == 1) {
    fit.c1 = std::exp(y[0]);
    fit.c2 = 1.0;
  }
  return fit;
}

namespace {

// y_{next} = y + f_a(y) X^a + d_b f_a(y) f^b_c(y) X^{ca} over (i, j).
void davie_increment(const VectorFieldSet& f, const RoughPath& X, std::size_t i, std::size_t j,
                     std::span<const double> y, std::span<double> out, std::vector<double>& fv,
                     std::vector<double>& dfv) {
  const std::size_t n = f.input_dim(), d = X.d;
  std::fill(out.begin(), out.end(), 0.0);
  // fv[c * n + b] = f^b_c(y)
  for (std::size_t c = 0; c < d; ++c) f.eval(c, {}, y, std::span<double>(fv.data() + c * n, n));
  for (std::size_t a = 0; a < d; ++a) {
    const double x1 = X.level1(i, j, a);
    for (std::size_t k = 0; k < n; ++k) out[k] += fv[a * n + k] * x1;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t part[1] = {b};
      f.eval(a, part, y, dfv);
      for (std::size_t c = 0; c < d; ++c) {
        const double w = fv[c * n + b] * X.level2(i, j, index2(d, c, a));
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) out[k] += dfv[k] * w;
      }
    }
  }
}

void require_finite(std::span<const double> v, std::size_t step) {
  for (double x : v)
    if (!std::isfinite(x)) throw NonFiniteError("rde: non-finite state at step " + std::to_string(step));
}

}  // namespace

Inc1<double> rde_solve(const VectorFieldSet& f, const RoughPath& X, std::span<const double> y0) {
  if (!(X.gamma > 1.0 / 3.0)) throw std::domain_error("rde_solve: requires gamma > 1/3");
  const std::size_t n = f.input_dim();
  check_field_shape(f, n, X.d, 1, "rde_solve");
  if (f.output_dim() != n || y0.size() != n) throw std::invalid_argument("rde_solve: state dimension mismatch");
  Inc1<double> y(X.grid, n);
  std::copy(y0.begin(), y0.end(), y.data().begin());
  std::vector<double> cur(y0.begin(), y0.end()), inc(n), fv(X.d * n), dfv(n);
  for (std::size_t i = 0; i + 1 < X.grid->points(); ++i) {
    davie_increment(f, X, i + 1, i, cur, inc, fv, dfv);
    for (std::size_t k = 0; k < n; ++k) cur[k] += inc[k];
    require_finite(cur, i + 1);
    for (std::size_t k = 0; k < n; ++k) y(i + 1, k) = cur[k];
  }
  return y;
}

PicardResult rde_solve_picard(const VectorFieldSet& f, const RoughPath& X, std::span<const double> y0,
                              std::size_t max_iterations, double tol) {
  if (!(X.gamma > 1.0 / 3.0)) throw std::domain_error("rde_solve_picard: requires gamma > 1/3");
  const std::size_t n = f.input_dim(), p = X.grid->points();
  check_field_shape(f, n, X.d, 1, "rde_solve_picard");
  if (f.output_dim() != n || y0.size() != n) throw std::invalid_argument("rde_solve_picard: state dimension mismatch");
  if (max_iterations == 0) max_iterations = p;
  PicardResult res{Inc1<double>(X.grid, n), 0, 0.0};
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < n; ++k) res.y(i, k) = y0[k];
  std::vector<double> inc(n), fv(X.d * n), dfv(n), cur(n);
  for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
    Inc1<double> next(X.grid, n);
    for (std::size_t k = 0; k < n; ++k) next(0, k) = y0[k];
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t k = 0; k < n; ++k) cur[k] = res.y(i, k);
      davie_increment(f, X, i + 1, i, cur, inc, fv, dfv);
      for (std::size_t k = 0; k < n; ++k) next(i + 1, k) = next(i, k) + inc[k];
      require_finite(next.value(i + 1), i + 1);
    }
    double change = 0.0;
    for (std::size_t q = 0; q < next.data().size(); ++q)
      change = std::max(change, std::abs(next.data()[q] - res.y.data()[q]));
    res.y = std::move(next);
    res.last_change = change;
    if (change <= tol) break;
  }
  res.iterations = std::min(res.iterations, max_iterations);
  return res;
}

}  // namespace roughtree
