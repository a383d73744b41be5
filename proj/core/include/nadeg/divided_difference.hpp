#pragma once

#include <span>

namespace nadeg {

enum class ExpMethod { divided_difference, series_fallback, subdivision };

const char* to_string(ExpMethod m);

struct DividedDifference {
  long double value = 0;
  double est_rel_error = 0;
  ExpMethod method = ExpMethod::divided_difference;
};

// Relative node spread below which the series evaluation is used.
inline constexpr double kClusterThreshold = 1e-4;

/// Divided difference [x_0, ..., x_N] exp of the exponential function.
///
/// Repeated nodes are allowed (confluent case). Nodes are shifted to their
/// minimum so that the bidiagonal matrix B with diagonal x_i - min and unit
/// subdiagonal is entrywise nonnegative; exp(B) is then formed by a Taylor
/// series with scaling and squaring, which involves no subtraction, and the
/// (N, 0) entry of exp(B) is the divided difference. When the relative spread
/// (max - min) / max(1, |mean|) is below kClusterThreshold the Taylor
/// expansion of the divided difference around the mean node is used instead.
DividedDifference exp_divided_difference(std::span<const long double> nodes);

/// Forces one evaluation path (divided_difference or series_fallback).
DividedDifference exp_divided_difference(std::span<const long double> nodes, ExpMethod method);

}  // namespace nadeg
