#include "hbtdit/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace hbtdit::numerics {

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

double parabolic_offset(double left, double centre, double right) {
  const double curvature = left - 2.0 * centre + right;
  if (curvature == 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
}

std::vector<std::size_t> local_minima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] <= values[i - 1] && values[i] < values[i + 1]) out.push_back(i);
  return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] >= values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  return out;
}

}  // namespace hbtdit::numerics
