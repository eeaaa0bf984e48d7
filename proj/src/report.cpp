#include "roughtree/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace roughtree {

MajorantReport ns_majorant(double epsilon, double B, double norm, double t, double k_abs, int n_max) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("ns_majorant: epsilon must lie in [0, 1)");
  if (!(B >= 0.0) || !(norm >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("ns_majorant: B, norm, t must be >= 0");
  if (!(k_abs > 0.0)) throw std::invalid_argument("ns_majorant: |k| must be positive");
  if (n_max < 0 || n_max > 500) throw std::invalid_argument("ns_majorant: n_max must lie in [0, 500]");

  MajorantReport rep;
  rep.epsilon = epsilon;
  rep.B = B;
  rep.norm = norm;
  rep.t = t;
  rep.k_abs = k_abs;
  rep.alpha = 2.0 + epsilon;

  const double size = norm * (1.0 + norm);
  double sum = 0.0;
  double prev = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    MajorantRow row;
    row.n = n;
    row.zn = n == 0 ? BigInt(1) : count_Zn(n);
    row.term = row.zn.convert_to<double>() * std::pow(B, n) * std::exp(-k_abs * k_abs * t / (n + 1)) *
               std::pow(k_abs, -rep.alpha) * std::pow(t, epsilon * n / 2.0) * std::pow(size, (n + 1) / 2.0);
    sum += row.term;
    row.partial_sum = sum;
    if (n > 0 && prev > 0.0) {
      row.ratio = row.term / prev;
      if (!(*row.ratio < 1.0)) rep.ratios_below_one = false;
    }
    prev = row.term;
    rep.rows.push_back(std::move(row));
  }

  const double scale = 3.0 * B * std::sqrt(size);
  rep.asymptotic_ratio = scale * std::pow(t, epsilon / 2.0);
  if (scale == 0.0) {
    rep.regime = "leading-term-only";
  } else if (epsilon == 0.0) {
    rep.regime = rep.asymptotic_ratio < 1.0 ? "converges-all-time" : "diverges";
  } else {
    rep.t_star = std::pow(1.0 / scale, 2.0 / epsilon);
    rep.regime = t < *rep.t_star ? "converges-until-t-star" : "diverges";
  }
  return rep;
}

namespace {

double log_big(const BigInt& x) {
  // Good to double precision for the sizes met here (below 16!).
  return std::log(x.convert_to<double>());
}

}  // namespace

TreeClassReport tree_class_report(int max_n, double alpha, double band) {
  if (max_n < 1 || max_n > kMaxClassReportWeight)
    throw std::invalid_argument("tree_class_report: max_n must lie in [1, 16]");
  TreeClassReport rep;
  rep.max_n = max_n;
  rep.alpha = alpha;
  rep.band = band;
  rep.min_ratio_to_power = std::numeric_limits<double>::infinity();

  std::vector<double> sn, lo, hi;
  BigInt fact = 1;
  for (int n = 1; n <= max_n; ++n) {
    fact *= n;
    std::map<TreeClass, ClassRow> by_class;
    BigInt overall_min;
    bool first = true;
    for_each_planar_binary(n, [&](const PlanarTree& t) {
      const BigInt g = tree_factorial(t);
      if (first || g < overall_min) overall_min = g;
      first = false;
      const TreeClass c = classify_tree(t, alpha, band);
      auto [it, fresh] = by_class.try_emplace(c);
      ClassRow& row = it->second;
      if (fresh) {
        row.n = n;
        row.cls = c;
        row.min_factorial = row.max_factorial = g;
      }
      ++row.count;
      row.min_factorial = std::min(row.min_factorial, g);
      row.max_factorial = std::max(row.max_factorial, g);
    });
    rep.min_factorial.push_back(overall_min);
    rep.min_ratio_to_power = std::min(rep.min_ratio_to_power, overall_min.convert_to<double>() / std::ldexp(1.0, n - 1));
    for (auto& [c, row] : by_class) {
      if (c == TreeClass::Simple && (row.count != 1 || row.min_factorial != fact || row.max_factorial != fact))
        rep.simple_is_factorial = false;
      if (c == TreeClass::Short && n > 1) {
        sn.push_back(n);
        lo.push_back(std::log(double(n)) + log_big(row.min_factorial));
        hi.push_back(std::log(double(n)) + log_big(row.max_factorial));
      }
      rep.rows.push_back(row);
    }
  }

  rep.short_fit.points = sn.size();
  if (sn.size() >= 2) {
    const LineFit up = fit_line(sn, hi);
    const LineFit down = fit_line(sn, lo);
    double up_shift = -std::numeric_limits<double>::infinity();
    double down_shift = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sn.size(); ++i) {
      up_shift = std::max(up_shift, hi[i] - up.slope * sn[i]);
      down_shift = std::min(down_shift, lo[i] - down.slope * sn[i]);
    }
    rep.short_fit.D1 = std::exp(up_shift);
    rep.short_fit.D2 = std::exp(up.slope);
    rep.short_fit.D3 = std::exp(down_shift);
    rep.short_fit.D4 = std::exp(down.slope);
    rep.short_fit.upper_residual = up.max_residual;
    rep.short_fit.lower_residual = down.max_residual;
  }
  return rep;
}

ZnFit zn_growth_fit(int n_max) {
  if (n_max < 2) throw std::invalid_argument("zn_growth_fit: n_max must be >= 2");
  ZnFit fit;
  fit.n_max = n_max;
  std::vector<double> ns, ys;
  for (int n = 1; n <= n_max; ++n) {
    const double y = log_big(count_Zn(n)) + 1.5 * std::log(n + 1.0);
    ns.push_back(n);
    ys.push_back(y);
    fit.least_D = std::max(fit.least_D, std::exp(y / n));
  }
  const LineFit line = fit_line(ns, ys);
  fit.fitted_D = std::exp(line.slope);
  fit.intercept = line.intercept;
  fit.max_residual = line.max_residual;
  return fit;
}

}  // namespace roughtree
