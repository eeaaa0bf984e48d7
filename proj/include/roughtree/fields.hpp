#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace roughtree {

/// Family of smooth maps g_a : R^n -> R^m, one per label a, with partial
/// derivatives available up to order().
///
/// A vector field set has m == n; a one-form along a path in R^d has n == d
/// labels acting on R^d.
class FieldFamily {
 public:
  virtual ~FieldFamily() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual std::size_t labels() const = 0;
  virtual int order() const = 0;

  /// Writes d^k g_a / dx_{b1} ... dx_{bk} at x into out; k = partials.size().
  virtual void eval(std::size_t a, std::span<const std::size_t> partials, std::span<const double> x,
                    std::span<double> out) const = 0;

  std::vector<double> value(std::size_t a, std::span<const double> x) const;
  std::vector<double> derivative(std::size_t a, std::span<const std::size_t> partials,
                                 std::span<const double> x) const;
};

using VectorFieldSet = FieldFamily;
using OneForm = FieldFamily;

/// Sparse real polynomial in n variables.
struct Polynomial {
  struct Term {
    double coef = 0.0;
    std::vector<int> exponents;
  };
  std::size_t vars = 0;
  std::vector<Term> terms;

  static Polynomial constant(std::size_t vars, double c);
  static Polynomial monomial(double coef, std::vector<int> exponents);

  double operator()(std::span<const double> x) const;
  Polynomial derivative(std::size_t var) const;
  Polynomial& operator+=(const Polynomial& other);
};

/// Polynomial family: component i of g_a is polys[a][i]. Derivatives are exact.
class PolynomialFieldFamily final : public FieldFamily {
 public:
  PolynomialFieldFamily(std::size_t input_dim, std::vector<std::vector<Polynomial>> polys);

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t output_dim() const override { return output_dim_; }
  std::size_t labels() const override { return polys_.size(); }
  int order() const override { return 64; }
  void eval(std::size_t a, std::span<const std::size_t> partials, std::span<const double> x,
            std::span<double> out) const override;

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<std::vector<Polynomial>> polys_;
};

/// User-supplied evaluator with a declared derivative order.
class FunctionFieldFamily final : public FieldFamily {
 public:
  using Evaluator = std::function<void(std::size_t a, std::span<const std::size_t> partials,
                                       std::span<const double> x, std::span<double> out)>;

  FunctionFieldFamily(std::size_t input_dim, std::size_t output_dim, std::size_t labels, int order,
                      Evaluator eval);

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t output_dim() const override { return output_dim_; }
  std::size_t labels() const override { return labels_; }
  int order() const override { return order_; }
  void eval(std::size_t a, std::span<const std::size_t> partials, std::span<const double> x,
            std::span<double> out) const override;

 private:
  std::size_t input_dim_, output_dim_, labels_;
  int order_;
  Evaluator eval_;
};

/// One-dimensional field y -> sum_k coefs[k] y^k (one label).
std::shared_ptr<PolynomialFieldFamily> scalar_polynomial_field(std::vector<double> coefs);
/// Linear fields f_a(y) = F_a y, matrices row-major n x n.
std::shared_ptr<PolynomialFieldFamily> linear_fields(std::size_t n, const std::vector<std::vector<double>>& matrices);

/// Largest relative gap between analytic derivatives (order 1..max_order) and
/// central differences of the next-lower order, over the probe points.
double finite_difference_gap(const FieldFamily& f, std::span<const std::vector<double>> probes, int max_order = 2,
                             double step = 1e-5);
/// Largest |d_{b1 b2 ...} - d_{permuted}| over probes, orders 2..max_order.
double mixed_partial_asymmetry(const FieldFamily& f, std::span<const std::vector<double>> probes, int max_order = 3);

}  // namespace roughtree
