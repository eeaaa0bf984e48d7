#include "roughtree/kdv.hpp"
#include "roughtree/numeric.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace roughtree {

SpectralState::SpectralState(int K) : K_(K) {
  if (K < 1) throw std::invalid_argument("SpectralState: K must be >= 1");
  v_.assign(static_cast<std::size_t>(2 * K + 1), cplx{});
}

void SpectralState::set_mode(int k, cplx value) {
  if (k == 0 || std::abs(k) > K_) throw std::out_of_range("SpectralState::set_mode: bad mode " + std::to_string(k));
  (*this)[k] = value;
  (*this)[-k] = std::conj(value);
}

double SpectralState::reality_defect() const {
  double m = std::abs((*this)[0]);
  for (int k = 1; k <= K_; ++k) m = std::max(m, std::abs((*this)[-k] - std::conj((*this)[k])));
  return m;
}

double SpectralState::max_abs() const {
  double m = 0.0;
  for (const auto& x : v_) m = std::max(m, std::abs(x));
  return m;
}

namespace {

void require_same_K(const SpectralState& a, const SpectralState& b) {
  if (a.K() != b.K()) throw std::invalid_argument("SpectralState: mode cutoff mismatch");
}

}  // namespace

SpectralState& SpectralState::operator+=(const SpectralState& other) {
  require_same_K(*this, other);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += other.v_[i];
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& other) {
  require_same_K(*this, other);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= other.v_[i];
  return *this;
}

SpectralState& SpectralState::operator*=(cplx c) {
  for (auto& x : v_) x *= c;
  return *this;
}

SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
SpectralState operator*(cplx c, SpectralState a) { return a *= c; }

cplx inner(const SpectralState& p1, const SpectralState& p2, double alpha) {
  require_same_K(p1, p2);
  cplx s{};
  for (int k = -p1.K(); k <= p1.K(); ++k) {
    if (k == 0) continue;
    s += std::pow(static_cast<double>(std::abs(k)), 2.0 * alpha) * p1[-k] * p2[k];
  }
  return s;
}

double h_norm_sq(const SpectralState& v, double alpha) { return inner(v, v, alpha).real(); }

namespace {

using Freq = long long;

constexpr cplx I{0.0, 1.0};

cplx phase(Freq w, double s) { return std::exp(-I * (static_cast<double>(w) * s)); }

// int_0^h exp(-i w tau) d tau, stable for small w h; h may be negative.
cplx e0(Freq w, double h) {
  if (w == 0) return h;
  const double theta = 0.5 * static_cast<double>(w) * h;
  const double sinc = std::abs(theta) < 1e-8 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
  return std::exp(-I * theta) * (h * sinc);
}

// int_s^t exp(-i w sigma) d sigma
cplx e_int(Freq w, double s, double t) { return phase(w, s) * e0(w, t - s); }

Freq omega(int k, int k1, int k2) { return 3LL * k * k1 * k2; }

// Pairs (k1, k2) with k1 + k2 = k inside the symmetric truncation.
template <class F>
void for_pairs(int K, int k, F&& f) {
  for (int k1 = std::max(-K, k - K); k1 <= std::min(K, k + K); ++k1) {
    const int k2 = k - k1;
    if (k1 == 0 || k2 == 0) continue;
    f(k1, k2);
  }
}

struct Inner {
  Freq w;
  cplx coef;
};

// For each mode m: the terms (im/2) p1(k1) p2(k2) with their phase 3 m k1 k2.
std::vector<std::vector<Inner>> inner_terms(const SpectralState& p1, const SpectralState& p2) {
  const int K = p1.K();
  std::vector<std::vector<Inner>> out(static_cast<std::size_t>(2 * K + 1));
  for (int m = -K; m <= K; ++m) {
    if (m == 0) continue;
    auto& list = out[static_cast<std::size_t>(m + K)];
    for_pairs(K, m, [&](int k1, int k2) {
      const cplx c = p1[k1] * p2[k2];
      if (c != cplx{}) list.push_back({omega(m, k1, k2), 0.5 * I * static_cast<double>(m) * c});
    });
  }
  return out;
}

const auto& gauss_nodes() { return boost::math::quadrature::gauss<double, 10>::abscissa(); }
const auto& gauss_weights() { return boost::math::quadrature::gauss<double, 10>::weights(); }

template <class F>
SpectralState gauss_integrate(int K, double s, double t, std::size_t panels, F&& integrand) {
  SpectralState acc(K);
  const double width = (t - s) / static_cast<double>(panels);
  const auto& x = gauss_nodes();
  const auto& w = gauss_weights();
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = s + (static_cast<double>(p) + 0.5) * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double sigma = mid + sign * 0.5 * width * x[i];
        SpectralState f = integrand(sigma);
        f *= 0.5 * width * w[i];
        acc += f;
      }
    }
  }
  return acc;
}

std::size_t auto_panels(int K, double h, int levels, const KdvQuadrature& q) {
  if (q.panels > 0) return q.panels;
  const double wmax = 3.0 * levels * static_cast<double>(K) * K * K;
  const auto panels = static_cast<std::size_t>(std::ceil(wmax * std::abs(h) / 2.0)) + 1;
  if (panels > q.max_panels)
    throw ResourceLimitError("kdv: time quadrature needs " + std::to_string(panels) + " panels, cap " +
                             std::to_string(q.max_panels));
  return panels;
}

}  // namespace

SpectralState xdot(double sigma, const SpectralState& p1, const SpectralState& p2) {
  require_same_K(p1, p2);
  const int K = p1.K();
  SpectralState out(K);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    cplx s{};
    for_pairs(K, k, [&](int k1, int k2) { s += phase(omega(k, k1, k2), sigma) * p1[k1] * p2[k2]; });
    out[k] = 0.5 * I * static_cast<double>(k) * s;
  }
  return out;
}

SpectralState x_bullet(double s, double t, const SpectralState& p1, const SpectralState& p2) {
  require_same_K(p1, p2);
  const int K = p1.K();
  SpectralState out(K);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    cplx acc{};
    for_pairs(K, k, [&](int k1, int k2) { acc += e_int(omega(k, k1, k2), s, t) * p1[k1] * p2[k2]; });
    out[k] = 0.5 * I * static_cast<double>(k) * acc;
  }
  return out;
}

SpectralState x_single_quadrature(double s, double t, const SpectralState& p1, const SpectralState& p2,
                                  const SpectralState& p3, std::size_t panels) {
  require_same_K(p1, p2);
  require_same_K(p1, p3);
  return gauss_integrate(p1.K(), s, t, panels,
                         [&](double sigma) { return xdot(sigma, x_bullet(s, sigma, p1, p2), p3); });
}

SpectralState x_double_quadrature(double s, double t, const SpectralState& p1, const SpectralState& p2,
                                  const SpectralState& p3, const SpectralState& p4, std::size_t panels) {
  require_same_K(p1, p2);
  require_same_K(p3, p4);
  require_same_K(p1, p3);
  return gauss_integrate(p1.K(), s, t, panels, [&](double sigma) {
    return xdot(sigma, x_bullet(s, sigma, p1, p2), x_bullet(s, sigma, p3, p4));
  });
}

SpectralState x_single(double s, double t, const SpectralState& p1, const SpectralState& p2, const SpectralState& p3,
                       const KdvQuadrature& q) {
  require_same_K(p1, p2);
  require_same_K(p1, p3);
  const int K = p1.K();
  if (K > q.closed_form_max_K) return x_single_quadrature(s, t, p1, p2, p3, auto_panels(K, t - s, 2, q));
  const auto A = inner_terms(p1, p2);
  SpectralState out(K);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    cplx acc{};
    for_pairs(K, k, [&](int m, int k3) {
      if (p3[k3] == cplx{}) return;
      const Freq w1 = omega(k, m, k3);
      cplx sum_m{};
      // int_s^t e^{-i w1 sigma} E_{sigma s}(w2) d sigma
      for (const auto& term : A[static_cast<std::size_t>(m + K)]) {
        const cplx val = (e_int(w1 + term.w, s, t) - phase(term.w, s) * e_int(w1, s, t)) /
                         (-I * static_cast<double>(term.w));
        sum_m += term.coef * val;
      }
      acc += sum_m * p3[k3];
    });
    out[k] = 0.5 * I * static_cast<double>(k) * acc;
  }
  return out;
}

SpectralState x_double(double s, double t, const SpectralState& p1, const SpectralState& p2, const SpectralState& p3,
                       const SpectralState& p4, const KdvQuadrature& q) {
  require_same_K(p1, p2);
  require_same_K(p3, p4);
  require_same_K(p1, p3);
  const int K = p1.K();
  if (K > q.closed_form_max_K) return x_double_quadrature(s, t, p1, p2, p3, p4, auto_panels(K, t - s, 3, q));
  const auto A = inner_terms(p1, p2);
  const auto B = inner_terms(p3, p4);
  SpectralState out(K);
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    cplx acc{};
    for_pairs(K, k, [&](int m1, int m2) {
      const Freq w0 = omega(k, m1, m2);
      for (const auto& a : A[static_cast<std::size_t>(m1 + K)])
        for (const auto& b : B[static_cast<std::size_t>(m2 + K)]) {
          const cplx val = e_int(w0 + a.w + b.w, s, t) - phase(b.w, s) * e_int(w0 + a.w, s, t) -
                           phase(a.w, s) * e_int(w0 + b.w, s, t) + phase(a.w + b.w, s) * e_int(w0, s, t);
          acc += a.coef * b.coef * val / ((-I * static_cast<double>(a.w)) * (-I * static_cast<double>(b.w)));
        }
    });
    out[k] = 0.5 * I * static_cast<double>(k) * acc;
  }
  return out;
}

SpectralState kdv_tree_step(const SpectralState& v, double s, double t, const KdvQuadrature& q) {
  if (std::abs(t - s) > kMaxKdvStep) throw std::invalid_argument("kdv_tree_step: step exceeds cap");
  SpectralState out = v;
  out += x_bullet(s, t, v, v);
  SpectralState second = x_single(s, t, v, v, v, q);
  second *= kSingleTreeCoefficient;
  out += second;
  return out;
}

namespace {

void require_finite(const SpectralState& v, std::size_t step) {
  for (int k = -v.K(); k <= v.K(); ++k)
    if (!std::isfinite(v[k].real()) || !std::isfinite(v[k].imag()))
      throw NonFiniteError("kdv: non-finite state at step " + std::to_string(step));
}

}  // namespace

KdvTrajectory kdv_solve(const SpectralState& v0, double T, std::size_t steps, double alpha, const KdvQuadrature& q) {
  if (steps < 1) throw std::invalid_argument("kdv_solve: steps must be >= 1");
  const double h = T / static_cast<double>(steps);
  KdvTrajectory traj;
  traj.alpha = alpha;
  SpectralState v = v0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.h0.push_back(h_norm_sq(v, 0.0));
    traj.h_alpha.push_back(h_norm_sq(v, alpha));
    traj.states.push_back(v);
  };
  record(0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s = h * static_cast<double>(i);
    const double t = h * static_cast<double>(i + 1);
    v = kdv_tree_step(v, s, t, q);
    require_finite(v, i + 1);
    record(t);
  }
  return traj;
}

SpectralState rk4_reference(const SpectralState& v0, double T, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("rk4_reference: steps must be >= 1");
  const double h = T / static_cast<double>(steps);
  SpectralState v = v0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    const auto k1 = xdot(t, v, v);
    const auto y2 = v + cplx(0.5 * h) * k1;
    const auto k2 = xdot(t + 0.5 * h, y2, y2);
    const auto y3 = v + cplx(0.5 * h) * k2;
    const auto k3 = xdot(t + 0.5 * h, y3, y3);
    const auto y4 = v + cplx(h) * k3;
    const auto k4 = xdot(t + h, y4, y4);
    SpectralState inc = k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4;
    inc *= h / 6.0;
    v += inc;
    require_finite(v, i + 1);
  }
  return v;
}

double conservation1_residual(const SpectralState& p1, const SpectralState& p2, const SpectralState& p3, double s,
                              double t) {
  const cplx r = inner(p1, x_bullet(s, t, p2, p3), 0.0) + inner(p2, x_bullet(s, t, p1, p3), 0.0) +
                 inner(p3, x_bullet(s, t, p2, p1), 0.0);
  return std::abs(r);
}

double conservation2_residual(const SpectralState& p, double s, double t, double factor) {
  const auto X = x_bullet(s, t, p, p);
  const auto X2 = x_single(s, t, p, p, p);
  return std::abs(2.0 * factor * inner(p, X2, 0.0) + inner(X, X, 0.0));
}

double single_relation_residual(const SpectralState& p1, const SpectralState& p2, const SpectralState& p3, double s,
                                double u, double t, const KdvQuadrature& q) {
  SpectralState d = x_single(s, t, p1, p2, p3, q);
  d -= x_single(u, t, p1, p2, p3, q);
  d -= x_single(s, u, p1, p2, p3, q);
  d -= x_bullet(u, t, x_bullet(s, u, p1, p2), p3);
  return d.max_abs();
}

double double_relation_residual(const SpectralState& p1, const SpectralState& p2, const SpectralState& p3,
                                const SpectralState& p4, double s, double u, double t, const KdvQuadrature& q) {
  SpectralState d = x_double(s, t, p1, p2, p3, p4, q);
  d -= x_double(u, t, p1, p2, p3, p4, q);
  d -= x_double(s, u, p1, p2, p3, p4, q);
  const auto a = x_bullet(s, u, p1, p2);
  const auto b = x_bullet(s, u, p3, p4);
  d -= x_bullet(u, t, a, b);
  d -= x_single(u, t, p1, p2, b, q);
  d -= x_single(u, t, p3, p4, a, q);
  return d.max_abs();
}

SpectralState smooth_state(int K) {
  SpectralState v(K);
  for (int k = 1; k <= K; ++k) v.set_mode(k, cplx(0.5, -0.1) / static_cast<double>(k * k));
  return v;
}

SpectralState random_state(int K, std::uint64_t seed, double decay) {
  SpectralState v(K);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 1; k <= K; ++k) {
    const double scale = std::pow(static_cast<double>(k), -decay);
    const double re = normal(rng), im = normal(rng);
    v.set_mode(k, scale * cplx(re, im));
  }
  return v;
}

}  // namespace roughtree
