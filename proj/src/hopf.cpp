#include "roughtree/hopf.hpp"

#include <cmath>
#include <mutex>

namespace roughtree {

void add_term(TensorVector& v, const Forest& left, const Forest& right, const Rational& c) {
  if (c == 0) return;
  auto key = std::make_pair(left, right);
  auto it = v.find(key);
  if (it == v.end()) {
    v.emplace(std::move(key), c);
    return;
  }
  it->second += c;
  if (it->second == 0) v.erase(it);
}

TensorVector multiply(const TensorVector& lhs, const TensorVector& rhs) {
  TensorVector out;
  for (const auto& [l, cl] : lhs)
    for (const auto& [r, cr] : rhs) add_term(out, l.first * r.first, l.second * r.second, cl * cr);
  return out;
}

namespace {

std::mutex g_cache_mutex;
std::map<Tree, TensorVector> g_cache;

}  // namespace

TensorVector coproduct(const Tree& t) {
  {
    std::lock_guard lock(g_cache_mutex);
    if (auto it = g_cache.find(t); it != g_cache.end()) return it->second;
  }
  TensorVector out;
  add_term(out, Forest{}, Forest(t), 1);
  const Forest branches(std::vector<Tree>(t.children().begin(), t.children().end()));
  for (const auto& [pair, c] : coproduct(branches))
    add_term(out, Forest(b_plus(t.root(), pair.first)), pair.second, c);
  std::lock_guard lock(g_cache_mutex);
  g_cache.emplace(t, out);
  return out;
}

TensorVector coproduct(const Forest& f) {
  TensorVector out;
  add_term(out, Forest{}, Forest{}, 1);
  for (const auto& t : f.trees()) out = multiply(out, coproduct(t));
  return out;
}

TensorVector reduced_coproduct(const Forest& f) {
  if (f.is_unit()) throw std::invalid_argument("reduced_coproduct: unit forest");
  TensorVector out = coproduct(f);
  add_term(out, Forest{}, f, -1);
  add_term(out, f, Forest{}, -1);
  return out;
}

TensorVector reduced_coproduct(const Tree& t) { return reduced_coproduct(Forest(t)); }

namespace {

BigInt coefficient(const TensorVector& v, const Forest& left, const Forest& right) {
  auto it = v.find({left, right});
  if (it == v.end()) return 0;
  return numerator(it->second);  // coproduct coefficients are integers
}

}  // namespace

BigInt counting(const Tree& t, const Forest& left, const Forest& right) {
  return coefficient(coproduct(t), left, right);
}

BigInt counting_reduced(const Tree& t, const Forest& left, const Forest& right) {
  return coefficient(reduced_coproduct(t), left, right);
}

std::vector<Word> shuffle(const Word& u, const Word& v) {
  if (u.empty()) return {v};
  if (v.empty()) return {u};
  std::vector<Word> out;
  const Word u_tail(u.begin(), u.end() - 1);
  const Word v_tail(v.begin(), v.end() - 1);
  for (auto w : shuffle(u_tail, v)) {
    w.push_back(u.back());
    out.push_back(std::move(w));
  }
  for (auto w : shuffle(u, v_tail)) {
    w.push_back(v.back());
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

Rational power(const Rational& x, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

Rational tree_binomial_residual(const Tree& t, const Rational& a, const Rational& b) {
  const BigInt fact = tree_factorial(t);
  Rational sum = 0;
  for (const auto& [pair, c] : coproduct(t)) {
    const Rational w(fact, tree_factorial(pair.first) * tree_factorial(pair.second));
    sum += c * w * power(a, pair.first.degree()) * power(b, pair.second.degree());
  }
  return power(a + b, t.weight()) - sum;
}

Rational counit(const Forest& f) { return f.is_unit() ? 1 : 0; }

HopfCheckReport check_hopf_identities(std::uint32_t d, int max_degree,
                                      const std::vector<std::pair<Rational, Rational>>& binomial_points) {
  HopfCheckReport rep;
  using Triple = std::tuple<Forest, Forest, Forest>;
  for (const auto& f : enumerate_forests(d, max_degree)) {
    ++rep.forests;
    const TensorVector cop = coproduct(f);

    ForestVector left_counit, right_counit;
    for (const auto& [pair, c] : cop) {
      if (pair.first.degree() + pair.second.degree() != f.degree()) {
        ++rep.grading_failures;
        rep.messages.push_back("grading: " + to_string(f));
      }
      if (pair.first.is_unit()) left_counit[pair.second] += c;
      if (pair.second.is_unit()) right_counit[pair.first] += c;
    }
    const ForestVector expected{{f, Rational(1)}};
    std::erase_if(left_counit, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(right_counit, [](const auto& kv) { return kv.second == 0; });
    if (left_counit != expected || right_counit != expected) {
      ++rep.counit_failures;
      rep.messages.push_back("counit: " + to_string(f));
    }

    std::map<Triple, Rational> lhs, rhs;
    for (const auto& [pair, c] : cop) {
      for (const auto& [inner, ci] : coproduct(pair.first))
        lhs[{inner.first, inner.second, pair.second}] += c * ci;
      for (const auto& [inner, ci] : coproduct(pair.second))
        rhs[{pair.first, inner.first, inner.second}] += c * ci;
    }
    std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
    if (lhs != rhs) {
      ++rep.coassociativity_failures;
      rep.messages.push_back("coassociativity: " + to_string(f));
    }

    if (f.size() == 1) {
      for (const auto& [a, b] : binomial_points) {
        if (tree_binomial_residual(f.trees()[0], a, b) != 0) {
          ++rep.binomial_failures;
          rep.messages.push_back("binomial: " + to_string(f));
        }
      }
    }
  }
  return rep;
}

namespace {

double q_gamma_memo(const Tree& t, double gamma, std::map<Tree, double>& memo);

double q_gamma_forest(const Forest& f, double gamma, std::map<Tree, double>& memo) {
  double q = 1.0;
  for (const auto& t : f.trees()) q *= q_gamma_memo(t, gamma, memo);
  return q;
}

double q_gamma_memo(const Tree& t, double gamma, std::map<Tree, double>& memo) {
  if (gamma * t.weight() <= 1.0) return 1.0;
  if (auto it = memo.find(t); it != memo.end()) return it->second;
  const double denom = std::exp2(gamma * t.weight()) - 2.0;
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw std::domain_error("q_gamma: singular exponent for " + to_string(t));
  double sum = 0.0;
  for (const auto& [pair, c] : reduced_coproduct(t))
    sum += to_double(c) * q_gamma_forest(pair.first, gamma, memo) * q_gamma_forest(pair.second, gamma, memo);
  const double q = sum / denom;
  memo.emplace(t, q);
  return q;
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("q_gamma: gamma must lie in (0, 1)");
}

}  // namespace

double q_gamma(const Tree& t, double gamma) {
  check_gamma(gamma);
  std::map<Tree, double> memo;
  return q_gamma_memo(t, gamma, memo);
}

double q_gamma(const Forest& f, double gamma) {
  check_gamma(gamma);
  std::map<Tree, double> memo;
  return q_gamma_forest(f, gamma, memo);
}

std::vector<QGammaRow> q_gamma_report(std::uint32_t d, double gamma, int max_weight) {
  check_gamma(gamma);
  std::vector<QGammaRow> rows;
  std::map<Tree, double> memo;
  for (const auto& t : enumerate_trees(d, max_weight)) {
    if (gamma * t.weight() <= 1.0) continue;
    QGammaRow row{t};
    row.q = q_gamma_memo(t, gamma, memo);
    row.factorial = tree_factorial(t).convert_to<double>();
    row.ratio = row.q * std::pow(row.factorial, gamma);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace roughtree
