#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughtree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exceeding a configured enumeration or materialization cap.
class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A 3-increment handed to the sewing map is not a cocycle.
class NotClosedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver produced NaN/Inf or left its admissible range.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares slope of log(y) against log(x). Entries with y <= 0 are skipped.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double to_double(const Rational& q);

}  // namespace roughtree
