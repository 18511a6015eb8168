#pragma once

#include <span>

#include "compass/embedding/types.hpp"

namespace compass {

/// T(k) = 1 - 2 / (n k (2n - 3k - 1)) * sum_i sum_{j in U_i(k)} (r(i, j) - k)
/// where U_i(k) are the k nearest low-dimensional neighbors of i that are not
/// among its k nearest high-dimensional neighbors and r(i, j) is the 1-based
/// rank of j by high-dimensional distance from i. Ties rank by index.
/// Requires 2 <= k and 2n - 3k - 1 > 0. Rows are scored in parallel.
double trustworthiness(const EmbeddingMatrix& high, Metric metric, std::span<const Point2> low,
                       std::size_t k);

/// Straight-line reference used to check the parallel kernel.
double trustworthiness_serial(const EmbeddingMatrix& high, Metric metric,
                              std::span<const Point2> low, std::size_t k);

}  // namespace compass
