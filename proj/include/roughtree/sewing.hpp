#pragma once

#include "roughtree/increments.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace roughtree {

/// Lazily evaluated 3-increment: writes h_{t_i t_j t_k} into `out`.
using Inc3Fn = std::function<void(std::size_t i, std::size_t j, std::size_t k, std::span<double> out)>;

struct SewingOptions {
  /// h is accepted as closed when every sampled |delta h| <= closed_tol * max|h|.
  double closed_tol = 1e-10;
  std::size_t max_samples = 100'000;
  std::uint64_t seed = 0x5eed;
  /// When set, the finest-scale sums of the result are replaced by local
  /// estimates c * dt^exponent fitted on adjacent step pairs. The result still
  /// satisfies delta(result) = h.
  std::optional<double> local_exponent;
};

/// Sum of a_{t_{i+1} t_i} over the finest partition of [s, t]; exact by construction.
Inc2<double> sew_limit(const Inc2<double>& a);

/// Largest sampled |delta h| over ordered 4-tuples, relative to max|h| seen.
struct ClosednessReport {
  double max_defect = 0.0;
  double max_value = 0.0;
  std::size_t samples = 0;
};
ClosednessReport closedness(const GridPtr& grid, std::size_t dim, const Inc3Fn& h, const SewingOptions& opts = {});

/// Sewing map: the unique preimage of a closed h under delta whose finest-partition sums vanish.
/// Throws NotClosedError when h fails the sampled cocycle check.
Inc2<double> lambda(const Inc3<double>& h, const SewingOptions& opts = {});
Inc2<double> lambda(const GridPtr& grid, std::size_t dim, const Inc3Fn& h, const SewingOptions& opts = {});

/// Splits a = delta f + r with delta f = sew_limit(a) and f_0 = 0.
struct ExactSplit {
  Inc1<double> f;
  Inc2<double> r;
};
ExactSplit project_exact(const Inc2<double>& a);

}  // namespace roughtree
