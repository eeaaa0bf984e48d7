#include "roughtree/increments.hpp"
#include "roughtree/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughtree {

GridPtr Grid::uniform(std::size_t n, double horizon) {
  if (n < 1) throw std::invalid_argument("Grid::uniform: need at least one step");
  if (!(horizon > 0.0)) throw std::invalid_argument("Grid::uniform: horizon must be positive");
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
  return std::shared_ptr<const Grid>(new Grid(std::move(t)));
}

GridPtr Grid::from_times(std::vector<double> times) {
  if (times.size() < 2) throw std::invalid_argument("Grid: need at least two points");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("Grid: times must increase strictly");
  return std::shared_ptr<const Grid>(new Grid(std::move(times)));
}

bool same_grid(const GridPtr& a, const GridPtr& b) { return a == b || *a == *b; }

namespace {

void require_same(const GridPtr& a, const GridPtr& b, const char* op) {
  if (!same_grid(a, b)) throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

void check_size(std::size_t steps, std::size_t cap, const char* what) {
  if (steps > cap)
    throw ResourceLimitError(std::string(what) + ": " + std::to_string(steps) + " steps exceeds cap " +
                             std::to_string(cap));
}

template <class Scalar>
double norm_of(std::span<const Scalar> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

template <class Scalar>
Inc1<Scalar>::Inc1(GridPtr grid, std::size_t dim)
    : grid_(std::move(grid)), dim_(dim), data_(grid_->points() * dim, Scalar{}) {}

template <class Scalar>
Inc2<Scalar>::Inc2(GridPtr grid, std::size_t dim) : grid_(std::move(grid)), dim_(dim) {
  check_size(grid_->steps(), kMaxInc2Steps, "Inc2");
  data_.assign(grid_->points() * grid_->points() * dim, Scalar{});
}

template <class Scalar>
Inc2<Scalar>& Inc2<Scalar>::operator+=(const Inc2& other) {
  require_same(grid_, other.grid_, "Inc2 +");
  if (dim_ != other.dim_) throw std::invalid_argument("Inc2 +: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

template <class Scalar>
Inc2<Scalar>& Inc2<Scalar>::operator-=(const Inc2& other) {
  require_same(grid_, other.grid_, "Inc2 -");
  if (dim_ != other.dim_) throw std::invalid_argument("Inc2 -: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <class Scalar>
Inc2<Scalar>& Inc2<Scalar>::operator*=(Scalar c) {
  for (auto& x : data_) x *= c;
  return *this;
}

template <class Scalar>
double Inc2<Scalar>::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
  return m;
}

template <class Scalar>
Inc3<Scalar>::Inc3(GridPtr grid, std::size_t dim) : grid_(std::move(grid)), dim_(dim) {
  check_size(grid_->steps(), kMaxInc3Steps, "Inc3");
  const std::size_t p = grid_->points();
  data_.assign(p * p * p * dim, Scalar{});
}

template <class Scalar>
Inc3<Scalar>& Inc3<Scalar>::operator-=(const Inc3& other) {
  require_same(grid_, other.grid_, "Inc3 -");
  if (dim_ != other.dim_) throw std::invalid_argument("Inc3 -: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <class Scalar>
double Inc3<Scalar>::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
  return m;
}

template <class Scalar>
Inc2<Scalar> delta1(const Inc1<Scalar>& f) {
  Inc2<Scalar> out(f.grid(), f.dim());
  const std::size_t p = f.points();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t c = 0; c < f.dim(); ++c) out(i, j, c) = f(i, c) - f(j, c);
  return out;
}

template <class Scalar>
Inc3<Scalar> delta2(const Inc2<Scalar>& a) {
  Inc3<Scalar> out(a.grid(), a.dim());
  const std::size_t p = a.points();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t c = 0; c < a.dim(); ++c) out(i, j, k, c) = a(i, k, c) - a(i, j, c) - a(j, k, c);
  return out;
}

template <class Scalar>
Scalar delta3_at(const Inc3<Scalar>& b, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                 std::size_t c) {
  return -b(j, k, l, c) + b(i, k, l, c) - b(i, j, l, c) + b(i, j, k, c);
}

template <class Scalar>
double holder_norm(const Inc2<Scalar>& a, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("holder_norm: gamma must be positive");
  const auto& g = *a.grid();
  double m = 0.0;
  for (std::size_t i = 1; i < a.points(); ++i)
    for (std::size_t j = 0; j < i; ++j) m = std::max(m, norm_of(a.value(i, j)) / std::pow(g[i] - g[j], gamma));
  return m;
}

template <class Scalar>
double holder_norm(const Inc3<Scalar>& b, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("holder_norm: gamma must be positive");
  const auto& g = *b.grid();
  double m = 0.0;
  std::vector<Scalar> v(b.dim());
  for (std::size_t i = 2; i < b.points(); ++i)
    for (std::size_t k = 0; k + 1 < i; ++k) {
      const double scale = std::pow(g[i] - g[k], gamma);
      for (std::size_t j = k + 1; j < i; ++j) {
        for (std::size_t c = 0; c < b.dim(); ++c) v[c] = b(i, j, k, c);
        m = std::max(m, norm_of<Scalar>(v) / scale);
      }
    }
  return m;
}

template <class Scalar>
Inc2<Scalar> cup(const Inc1<Scalar>& g, const Inc2<Scalar>& h) {
  require_same(g.grid(), h.grid(), "cup");
  const std::size_t dg = g.dim(), dh = h.dim(), p = h.points();
  Inc2<Scalar> out(h.grid(), dg * dh);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t a = 0; a < dg; ++a)
        for (std::size_t b = 0; b < dh; ++b) out(i, j, a * dh + b) = g(i, a) * h(i, j, b);
  return out;
}

template <class Scalar>
Inc2<Scalar> cup(const Inc2<Scalar>& h, const Inc1<Scalar>& g) {
  require_same(g.grid(), h.grid(), "cup");
  const std::size_t dg = g.dim(), dh = h.dim(), p = h.points();
  Inc2<Scalar> out(h.grid(), dh * dg);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t a = 0; a < dh; ++a)
        for (std::size_t b = 0; b < dg; ++b) out(i, j, a * dg + b) = h(i, j, a) * g(j, b);
  return out;
}

template <class Scalar>
Inc3<Scalar> cup(const Inc2<Scalar>& g, const Inc2<Scalar>& h) {
  require_same(g.grid(), h.grid(), "cup");
  const std::size_t dg = g.dim(), dh = h.dim(), p = h.points();
  Inc3<Scalar> out(h.grid(), dg * dh);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t a = 0; a < dg; ++a)
          for (std::size_t b = 0; b < dh; ++b) out(i, j, k, a * dh + b) = g(i, j, a) * h(j, k, b);
  return out;
}

template <class Scalar>
Inc1<Scalar> reconstruct(const Inc2<Scalar>& a) {
  Inc1<Scalar> f(a.grid(), a.dim());
  for (std::size_t i = 0; i < a.points(); ++i)
    for (std::size_t c = 0; c < a.dim(); ++c) f(i, c) = a(i, 0, c);
  return f;
}

namespace {

ScaleProfile finish_profile(ScaleProfile prof) {
  for (double v : prof.values) prof.max_value = std::max(prof.max_value, v);
  prof.slope = loglog_slope(prof.lengths, prof.values);
  return prof;
}

}  // namespace

// Scales stop once fewer than min_points offsets remain at that scale.
ScaleProfile pair_scale_profile(const Grid& grid, const std::function<double(std::size_t, std::size_t)>& value,
                                std::size_t min_points) {
  ScaleProfile prof;
  const std::size_t n = grid.steps();
  const double dt = grid.horizon() / static_cast<double>(n);
  for (std::size_t l = 1; l <= n && n - l + 1 >= min_points; l *= 2) {
    double m = 0.0;
    for (std::size_t s = 0; s + l <= n; ++s) m = std::max(m, value(s + l, s));
    prof.lengths.push_back(static_cast<double>(l) * dt);
    prof.values.push_back(m);
  }
  return finish_profile(std::move(prof));
}

ScaleProfile triple_scale_profile(const Grid& grid,
                                  const std::function<double(std::size_t, std::size_t, std::size_t)>& value,
                                  std::size_t min_points) {
  ScaleProfile prof;
  const std::size_t n = grid.steps();
  const double dt = grid.horizon() / static_cast<double>(n);
  for (std::size_t l = 1; 2 * l <= n && n - 2 * l + 1 >= min_points; l *= 2) {
    double m = 0.0;
    for (std::size_t s = 0; s + 2 * l <= n; ++s) m = std::max(m, value(s + 2 * l, s + l, s));
    prof.lengths.push_back(2.0 * static_cast<double>(l) * dt);
    prof.values.push_back(m);
  }
  return finish_profile(std::move(prof));
}

#define ROUGHTREE_INSTANTIATE(S)                                                              \
  template class Inc1<S>;                                                                     \
  template class Inc2<S>;                                                                     \
  template class Inc3<S>;                                                                     \
  template Inc2<S> delta1(const Inc1<S>&);                                                    \
  template Inc3<S> delta2(const Inc2<S>&);                                                    \
  template S delta3_at(const Inc3<S>&, std::size_t, std::size_t, std::size_t, std::size_t,    \
                       std::size_t);                                                          \
  template double holder_norm(const Inc2<S>&, double);                                        \
  template double holder_norm(const Inc3<S>&, double);                                        \
  template Inc2<S> cup(const Inc1<S>&, const Inc2<S>&);                                       \
  template Inc2<S> cup(const Inc2<S>&, const Inc1<S>&);                                       \
  template Inc3<S> cup(const Inc2<S>&, const Inc2<S>&);                                       \
  template Inc1<S> reconstruct(const Inc2<S>&);

ROUGHTREE_INSTANTIATE(double)
ROUGHTREE_INSTANTIATE(std::complex<double>)

#undef ROUGHTREE_INSTANTIATE

}  // namespace roughtree
