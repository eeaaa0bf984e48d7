#pragma once

#include "roughtree/numeric.hpp"
#include "roughtree/planar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace roughtree {

struct MajorantRow {
  int n = 0;
  BigInt zn;
  double term = 0.0;
  double partial_sum = 0.0;
  std::optional<double> ratio;  // term_n / term_{n-1}
};

struct MajorantReport {
  double epsilon = 0.0, B = 0.0, norm = 0.0, t = 0.0, k_abs = 1.0;
  double alpha = 2.0;  // 2 + epsilon
  std::vector<MajorantRow> rows;
  bool ratios_below_one = true;
  /// Limit of term_{n+1} / term_n: 3 B t^{eps/2} sqrt(norm (1 + norm)).
  double asymptotic_ratio = 0.0;
  /// Time where the limit ratio reaches 1 (epsilon > 0 and B, norm > 0).
  std::optional<double> t_star;
  /// "leading-term-only", "converges-all-time", "converges-until-t-star" or "diverges".
  std::string regime;
};

/// Terms Z_n B^n e^{-k^2 t / (n+1)} |k|^{-alpha} t^{eps n / 2} (norm (1 + norm))^{(n+1)/2}
/// for n = 0 .. n_max, with Z_0 = 1 for the free term.
MajorantReport ns_majorant(double epsilon, double B, double norm, double t, double k_abs, int n_max);

struct ClassRow {
  int n = 0;
  TreeClass cls = TreeClass::Other;
  std::size_t count = 0;
  BigInt min_factorial, max_factorial;
};

/// D3 n^{-1} D4^n <= gamma <= D1 n^{-1} D2^n over the short class. The growth
/// rates come from least squares on log(n gamma); the prefactors are then
/// moved just far enough to enclose every point.
struct ShortClassFit {
  std::size_t points = 0;
  double D1 = 0.0, D2 = 0.0, D3 = 0.0, D4 = 0.0;
  double upper_residual = 0.0, lower_residual = 0.0;
};

struct TreeClassReport {
  int max_n = 0;
  double alpha = 0.0, band = 0.1;
  std::vector<ClassRow> rows;
  bool simple_is_factorial = true;
  ShortClassFit short_fit;
  /// Smallest tree factorial over every tree of weight n, and its ratio to 2^{n-1}.
  std::vector<BigInt> min_factorial;
  double min_ratio_to_power = 0.0;
};

inline constexpr int kMaxClassReportWeight = 16;
/// Frozen empirical bound gamma(tau) >= kFactorialBoundConstant * 2^{|tau|-1}, tight at |tau| = 3.
inline constexpr double kFactorialBoundConstant = 0.75;

TreeClassReport tree_class_report(int max_n, double alpha, double band = 0.1);

/// Z_n <= D^n (n+1)^{-3/2}.
struct ZnFit {
  int n_max = 0;
  double least_D = 0.0;  // smallest D enclosing every n
  double fitted_D = 0.0;  // exp(slope) of log(Z_n (n+1)^{3/2}) against n
  double intercept = 0.0;
  double max_residual = 0.0;
};
ZnFit zn_growth_fit(int n_max);

}  // namespace roughtree
