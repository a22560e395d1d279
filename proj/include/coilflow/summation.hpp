#pragma once

#include <cstddef>
#include <span>

namespace coilflow {

/// Pairwise (cascade) sum; the result depends only on the values and their order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace coilflow
