#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace roughtree {

/// Strictly increasing times t_0 < ... < t_N.
class Grid {
 public:
  static std::shared_ptr<const Grid> uniform(std::size_t n, double horizon = 1.0);
  static std::shared_ptr<const Grid> from_times(std::vector<double> times);

  std::size_t steps() const { return times_.size() - 1; }
  std::size_t points() const { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  std::span<const double> times() const { return times_; }
  double horizon() const { return times_.back(); }

  friend bool operator==(const Grid& a, const Grid& b) { return a.times_ == b.times_; }

 private:
  explicit Grid(std::vector<double> times) : times_(std::move(times)) {}
  std::vector<double> times_;
};

using GridPtr = std::shared_ptr<const Grid>;

bool same_grid(const GridPtr& a, const GridPtr& b);

inline constexpr std::size_t kMaxInc2Steps = 2048;
inline constexpr std::size_t kMaxInc3Steps = 256;

/// Values on grid points, each a vector of `dim` components.
template <class Scalar>
class Inc1 {
 public:
  Inc1(GridPtr grid, std::size_t dim);

  const GridPtr& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t points() const { return grid_->points(); }

  Scalar& operator()(std::size_t i, std::size_t c = 0) { return data_[i * dim_ + c]; }
  const Scalar& operator()(std::size_t i, std::size_t c = 0) const { return data_[i * dim_ + c]; }
  std::span<const Scalar> value(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

 private:
  GridPtr grid_;
  std::size_t dim_;
  std::vector<Scalar> data_;
};

/// Values on ordered pairs (i, j), meaning a_{t_i t_j}. The diagonal is zero.
template <class Scalar>
class Inc2 {
 public:
  Inc2(GridPtr grid, std::size_t dim);

  const GridPtr& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t points() const { return grid_->points(); }

  Scalar& operator()(std::size_t i, std::size_t j, std::size_t c = 0) {
    return data_[(i * points() + j) * dim_ + c];
  }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t c = 0) const {
    return data_[(i * points() + j) * dim_ + c];
  }
  std::span<const Scalar> value(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * points() + j) * dim_, dim_};
  }
  std::span<Scalar> value(std::size_t i, std::size_t j) {
    return {data_.data() + (i * points() + j) * dim_, dim_};
  }
  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

  Inc2& operator+=(const Inc2& other);
  Inc2& operator-=(const Inc2& other);
  Inc2& operator*=(Scalar c);
  double max_abs() const;

 private:
  GridPtr grid_;
  std::size_t dim_;
  std::vector<Scalar> data_;
};

/// Values on ordered triples (i, j, k), meaning b_{t_i t_j t_k}.
template <class Scalar>
class Inc3 {
 public:
  Inc3(GridPtr grid, std::size_t dim);

  const GridPtr& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t points() const { return grid_->points(); }

  Scalar& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t c = 0) {
    return data_[((i * points() + j) * points() + k) * dim_ + c];
  }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t c = 0) const {
    return data_[((i * points() + j) * points() + k) * dim_ + c];
  }
  std::span<const Scalar> data() const { return data_; }

  Inc3& operator-=(const Inc3& other);
  double max_abs() const;

 private:
  GridPtr grid_;
  std::size_t dim_;
  std::vector<Scalar> data_;
};

template <class Scalar> Inc2<Scalar> operator+(Inc2<Scalar> a, const Inc2<Scalar>& b) { return a += b; }
template <class Scalar> Inc2<Scalar> operator-(Inc2<Scalar> a, const Inc2<Scalar>& b) { return a -= b; }
template <class Scalar> Inc2<Scalar> operator*(Scalar c, Inc2<Scalar> a) { return a *= c; }
template <class Scalar> Inc3<Scalar> operator-(Inc3<Scalar> a, const Inc3<Scalar>& b) { return a -= b; }

/// (delta f)_{ts} = f_t - f_s.
template <class Scalar> Inc2<Scalar> delta1(const Inc1<Scalar>& f);
/// (delta a)_{tus} = a_{ts} - a_{tu} - a_{us}.
template <class Scalar> Inc3<Scalar> delta2(const Inc2<Scalar>& a);
/// (delta b)_{t1 t2 t3 t4} = -b_{234} + b_{134} - b_{124} + b_{123}, one component.
template <class Scalar>
Scalar delta3_at(const Inc3<Scalar>& b, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                 std::size_t c = 0);

/// Largest |a_{ts}| / (t - s)^gamma over s < t, Euclidean over components.
template <class Scalar> double holder_norm(const Inc2<Scalar>& a, double gamma);
/// Same over s < u < t with the outer distance t - s.
template <class Scalar> double holder_norm(const Inc3<Scalar>& b, double gamma);

// Cup products share the middle time; components combine as an outer product
// with index (ig * h.dim() + ih).
/// (g h)_{ts} = g_t h_{ts}
template <class Scalar> Inc2<Scalar> cup(const Inc1<Scalar>& g, const Inc2<Scalar>& h);
/// (h g)_{ts} = h_{ts} g_s
template <class Scalar> Inc2<Scalar> cup(const Inc2<Scalar>& h, const Inc1<Scalar>& g);
/// (g h)_{tus} = g_{tu} h_{us}
template <class Scalar> Inc3<Scalar> cup(const Inc2<Scalar>& g, const Inc2<Scalar>& h);

/// f_i = a_{t_i t_0}; recovers f (up to a constant) when a is closed.
template <class Scalar> Inc1<Scalar> reconstruct(const Inc2<Scalar>& a);

/// Decay of a two- or three-time quantity across dyadic scales l = 1, 2, 4, ...:
/// values[k] is the largest magnitude over pairs (s + l, s) or triples
/// (s + 2l, s + l, s), and the slope is fitted in log-log against l * dt.
struct ScaleProfile {
  std::vector<double> lengths;
  std::vector<double> values;
  double slope = 0.0;
  double max_value = 0.0;
};
ScaleProfile pair_scale_profile(const Grid& grid, const std::function<double(std::size_t, std::size_t)>& value,
                                std::size_t min_points = 3);
ScaleProfile triple_scale_profile(const Grid& grid,
                                  const std::function<double(std::size_t, std::size_t, std::size_t)>& value,
                                  std::size_t min_points = 3);

}  // namespace roughtree
