#pragma once

#include <span>

#include "compass/embedding/types.hpp"

namespace compass {

// 1 - a.b / (|a| |b|), accumulated in double and clamped to [0, 2].
// Throws on length mismatch or a zero-norm input.
double cosine_distance(std::span<const float> a, std::span<const float> b);
double euclidean_distance(std::span<const float> a, std::span<const float> b);
double distance(Metric metric, std::span<const float> a, std::span<const float> b);

// Building blocks shared by the batched kernels so they agree bit-for-bit with
// the pairwise functions above.
double dot_product(std::span<const float> a, std::span<const float> b) noexcept;
double squared_norm(std::span<const float> a) noexcept;
double cosine_from_parts(double dot, double norm_sq_a, double norm_sq_b) noexcept;
double squared_euclidean(std::span<const float> a, std::span<const float> b) noexcept;

}  // namespace compass
