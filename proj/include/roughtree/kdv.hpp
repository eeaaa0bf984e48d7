#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace roughtree {

using cplx = std::complex<double>;

/// Fourier coefficients v(k), |k| <= K, with v(0) = 0. Physical states obey
/// v(-k) = conj(v(k)); the operators accept arbitrary coefficients.
class SpectralState {
 public:
  explicit SpectralState(int K);

  int K() const { return K_; }
  cplx operator[](int k) const { return v_[static_cast<std::size_t>(k + K_)]; }
  cplx& operator[](int k) { return v_[static_cast<std::size_t>(k + K_)]; }
  /// Sets v(k) and v(-k) = conj(value).
  void set_mode(int k, cplx value);
  /// max |v(-k) - conj(v(k))| together with |v(0)|.
  double reality_defect() const;
  double max_abs() const;

  SpectralState& operator+=(const SpectralState& other);
  SpectralState& operator-=(const SpectralState& other);
  SpectralState& operator*=(cplx c);

 private:
  int K_;
  std::vector<cplx> v_;
};

SpectralState operator+(SpectralState a, const SpectralState& b);
SpectralState operator-(SpectralState a, const SpectralState& b);
SpectralState operator*(cplx c, SpectralState a);

/// <p1, p2>_alpha = sum_{k != 0} |k|^{2 alpha} p1(-k) p2(k) (bilinear).
cplx inner(const SpectralState& p1, const SpectralState& p2, double alpha);
/// Real part of <v, v>_alpha.
double h_norm_sq(const SpectralState& v, double alpha);

/// Interaction-picture nonlinearity at time sigma:
/// (ik/2) sum_{k1 + k2 = k} exp(-i (k^3 - k1^3 - k2^3) sigma) p1(k1) p2(k2),
/// truncated symmetrically to |k|, |k1|, |k2| <= K.
SpectralState xdot(double sigma, const SpectralState& p1, const SpectralState& p2);

/// Time integral of xdot over [s, t], in closed form.
SpectralState x_bullet(double s, double t, const SpectralState& p1, const SpectralState& p2);

struct KdvQuadrature {
  /// Above this cutoff the second-level operators integrate in time numerically.
  int closed_form_max_K = 32;
  /// Composite Gauss-Legendre panels; 0 picks enough for the largest phase.
  std::size_t panels = 0;
  std::size_t max_panels = 4096;
};

/// int_s^t xdot_sigma(X^bullet_{sigma s}(p1, p2), p3) d sigma
SpectralState x_single(double s, double t, const SpectralState& p1, const SpectralState& p2,
                       const SpectralState& p3, const KdvQuadrature& q = {});
/// int_s^t xdot_sigma(X^bullet_{sigma s}(p1, p2), X^bullet_{sigma s}(p3, p4)) d sigma
SpectralState x_double(double s, double t, const SpectralState& p1, const SpectralState& p2,
                       const SpectralState& p3, const SpectralState& p4, const KdvQuadrature& q = {});

/// Same operators by composite Gauss-Legendre time quadrature of the outer integral.
SpectralState x_single_quadrature(double s, double t, const SpectralState& p1, const SpectralState& p2,
                                  const SpectralState& p3, std::size_t panels);
SpectralState x_double_quadrature(double s, double t, const SpectralState& p1, const SpectralState& p2,
                                  const SpectralState& p3, const SpectralState& p4, std::size_t panels);

/// Coefficient of X^{[•]}(v, v, v) in one step. The second Picard iterate of
/// v_t = v_s + int xdot(v, v) produces this factor, and with it the quadratic
/// H_0 defect of a step cancels.
inline constexpr double kSingleTreeCoefficient = 2.0;

/// v + X^bullet_{ts}(v, v) + 2 X^{[•]}_{ts}(v, v, v).
SpectralState kdv_tree_step(const SpectralState& v, double s, double t, const KdvQuadrature& q = {});

inline constexpr double kMaxKdvStep = 0.05;

struct KdvTrajectory {
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<double> h0;
  std::vector<double> h_alpha;
  std::vector<SpectralState> states;
};

/// Repeated tree steps of size T / steps. Throws NonFiniteError on blow-up.
KdvTrajectory kdv_solve(const SpectralState& v0, double T, std::size_t steps, double alpha = 0.0,
                        const KdvQuadrature& q = {});

/// Classical RK4 on dv/dt = xdot_t(v, v).
SpectralState rk4_reference(const SpectralState& v0, double T, std::size_t steps);

/// |<p1, X(p2, p3)> + <p2, X(p1, p3)> + <p3, X(p2, p1)>|_0 with X = X^bullet_{ts}.
double conservation1_residual(const SpectralState& p1, const SpectralState& p2, const SpectralState& p3, double s,
                              double t);
/// |2 <p, X2(p, p, p)> + <X(p, p), X(p, p)>|_0 with X2 = factor * X^{[•]}.
/// factor 1 is the plain symmetrised reading, factor 2 the Picard one.
double conservation2_residual(const SpectralState& p, double s, double t, double factor);

/// Largest |mode| of delta X^{[•]}_{tus} - X^bullet_{tu}(X^bullet_{us}(p1, p2), p3).
double single_relation_residual(const SpectralState& p1, const SpectralState& p2, const SpectralState& p3, double s,
                                double u, double t, const KdvQuadrature& q = {});
/// Same for the three-term relation of X^{[••]}.
double double_relation_residual(const SpectralState& p1, const SpectralState& p2, const SpectralState& p3,
                                const SpectralState& p4, double s, double u, double t, const KdvQuadrature& q = {});

/// v(k) = (0.5 - 0.1 i) / k^2 for k > 0, conjugate below.
SpectralState smooth_state(int K);
/// Seeded reality-constrained state with |v(k)| ~ |k|^{-decay}.
SpectralState random_state(int K, std::uint64_t seed, double decay = 1.0);

}  // namespace roughtree
