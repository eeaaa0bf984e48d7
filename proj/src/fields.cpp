#include "roughtree/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace roughtree {

std::vector<double> FieldFamily::value(std::size_t a, std::span<const double> x) const {
  std::vector<double> out(output_dim());
  eval(a, {}, x, out);
  return out;
}

std::vector<double> FieldFamily::derivative(std::size_t a, std::span<const std::size_t> partials,
                                            std::span<const double> x) const {
  std::vector<double> out(output_dim());
  eval(a, partials, x, out);
  return out;
}

Polynomial Polynomial::constant(std::size_t vars, double c) {
  Polynomial p{vars, {}};
  if (c != 0.0) p.terms.push_back({c, std::vector<int>(vars, 0)});
  return p;
}

Polynomial Polynomial::monomial(double coef, std::vector<int> exponents) {
  Polynomial p{exponents.size(), {}};
  if (coef != 0.0) p.terms.push_back({coef, std::move(exponents)});
  return p;
}

double Polynomial::operator()(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : terms) {
    double m = t.coef;
    for (std::size_t v = 0; v < vars; ++v)
      for (int e = 0; e < t.exponents[v]; ++e) m *= x[v];
    s += m;
  }
  return s;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial d{vars, {}};
  for (const auto& t : terms) {
    if (t.exponents[var] == 0) continue;
    Term dt = t;
    dt.coef *= t.exponents[var];
    --dt.exponents[var];
    d.terms.push_back(std::move(dt));
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (vars != other.vars) throw std::invalid_argument("Polynomial +=: variable count mismatch");
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

PolynomialFieldFamily::PolynomialFieldFamily(std::size_t input_dim, std::vector<std::vector<Polynomial>> polys)
    : input_dim_(input_dim), output_dim_(polys.empty() ? 0 : polys.front().size()), polys_(std::move(polys)) {
  for (const auto& comps : polys_) {
    if (comps.size() != output_dim_) throw std::invalid_argument("PolynomialFieldFamily: ragged output");
    for (const auto& p : comps) {
      if (p.vars != input_dim_) throw std::invalid_argument("PolynomialFieldFamily: variable count mismatch");
      for (const auto& t : p.terms)
        if (t.exponents.size() != input_dim_) throw std::invalid_argument("PolynomialFieldFamily: bad exponent vector");
    }
  }
}

void PolynomialFieldFamily::eval(std::size_t a, std::span<const std::size_t> partials, std::span<const double> x,
                                 std::span<double> out) const {
  for (std::size_t i = 0; i < output_dim_; ++i) {
    const Polynomial* p = &polys_[a][i];
    Polynomial tmp;
    for (std::size_t b : partials) {
      tmp = p->derivative(b);
      p = &tmp;
    }
    out[i] = (*p)(x);
  }
}

FunctionFieldFamily::FunctionFieldFamily(std::size_t input_dim, std::size_t output_dim, std::size_t labels, int order,
                                         Evaluator eval)
    : input_dim_(input_dim), output_dim_(output_dim), labels_(labels), order_(order), eval_(std::move(eval)) {}

void FunctionFieldFamily::eval(std::size_t a, std::span<const std::size_t> partials, std::span<const double> x,
                               std::span<double> out) const {
  if (static_cast<int>(partials.size()) > order_)
    throw std::domain_error("FunctionFieldFamily: derivative order beyond declared smoothness");
  eval_(a, partials, x, out);
}

std::shared_ptr<PolynomialFieldFamily> scalar_polynomial_field(std::vector<double> coefs) {
  Polynomial p{1, {}};
  for (std::size_t k = 0; k < coefs.size(); ++k)
    if (coefs[k] != 0.0) p.terms.push_back({coefs[k], {static_cast<int>(k)}});
  return std::make_shared<PolynomialFieldFamily>(1, std::vector<std::vector<Polynomial>>{{p}});
}

std::shared_ptr<PolynomialFieldFamily> linear_fields(std::size_t n, const std::vector<std::vector<double>>& matrices) {
  std::vector<std::vector<Polynomial>> polys;
  for (const auto& m : matrices) {
    if (m.size() != n * n) throw std::invalid_argument("linear_fields: matrix must be n x n");
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial p{n, {}};
      for (std::size_t j = 0; j < n; ++j) {
        if (m[i * n + j] == 0.0) continue;
        std::vector<int> e(n, 0);
        e[j] = 1;
        p.terms.push_back({m[i * n + j], std::move(e)});
      }
      comps.push_back(std::move(p));
    }
    polys.push_back(std::move(comps));
  }
  return std::make_shared<PolynomialFieldFamily>(n, std::move(polys));
}

namespace {

// Every multi-index of `len` entries in [0, n).
std::vector<std::vector<std::size_t>> all_indices(std::size_t n, int len) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (int k = 0; k < len; ++k) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& v : out)
      for (std::size_t b = 0; b < n; ++b) {
        auto w = v;
        w.push_back(b);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

double finite_difference_gap(const FieldFamily& f, std::span<const std::vector<double>> probes, int max_order,
                             double step) {
  const std::size_t n = f.input_dim(), m = f.output_dim();
  max_order = std::min(max_order, f.order());
  double worst = 0.0;
  std::vector<double> plus(m), minus(m), exact(m);
  for (const auto& x : probes) {
    for (std::size_t a = 0; a < f.labels(); ++a)
      for (int k = 1; k <= max_order; ++k)
        for (const auto& idx : all_indices(n, k)) {
          const std::span<const std::size_t> lower(idx.data(), idx.size() - 1);
          const std::size_t b = idx.back();
          auto xp = x, xm = x;
          xp[b] += step;
          xm[b] -= step;
          f.eval(a, lower, xp, plus);
          f.eval(a, lower, xm, minus);
          f.eval(a, idx, x, exact);
          for (std::size_t i = 0; i < m; ++i) {
            const double fd = (plus[i] - minus[i]) / (2 * step);
            worst = std::max(worst, std::abs(fd - exact[i]) / std::max(1.0, std::abs(exact[i])));
          }
        }
  }
  return worst;
}

double mixed_partial_asymmetry(const FieldFamily& f, std::span<const std::vector<double>> probes, int max_order) {
  const std::size_t n = f.input_dim(), m = f.output_dim();
  max_order = std::min(max_order, f.order());
  double worst = 0.0;
  std::vector<double> ref(m), perm(m);
  for (const auto& x : probes)
    for (std::size_t a = 0; a < f.labels(); ++a)
      for (int k = 2; k <= max_order; ++k)
        for (auto idx : all_indices(n, k)) {
          std::sort(idx.begin(), idx.end());
          f.eval(a, idx, x, ref);
          while (std::next_permutation(idx.begin(), idx.end())) {
            f.eval(a, idx, x, perm);
            for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(perm[i] - ref[i]));
          }
        }
  return worst;
}

}  // namespace roughtree
