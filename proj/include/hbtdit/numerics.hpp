#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hbtdit::numerics {

/// Composite trapezoid on uniformly spaced samples, summed left to right.
template <class T>
T trapezoid(std::span<const T> values, double spacing) {
  if (values.size() < 2) return T{};
  T inner{};
  for (std::size_t i = 1; i + 1 < values.size(); ++i) inner += values[i];
  return spacing * (inner + 0.5 * (values.front() + values.back()));
}

template <class T>
T trapezoid(const std::vector<T>& values, double spacing) {
  return trapezoid(std::span<const T>(values), spacing);
}

/// Index of the largest element; ties resolve to the first one.
std::size_t argmax(std::span<const double> values);

/// Vertex of the parabola through (i-1, i, i+1), as a fractional index offset
/// in [-0.5, 0.5]. Falls back to 0 on flat data.
double parabolic_offset(double left, double centre, double right);

/// Local minima of `values` strictly inside the range, by index.
std::vector<std::size_t> local_minima(std::span<const double> values);

/// Local maxima of `values` strictly inside the range, by index.
std::vector<std::size_t> local_maxima(std::span<const double> values);

}  // namespace hbtdit::numerics
