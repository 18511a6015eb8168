#pragma once

#include <cstdint>
#include <vector>

#include "compass/embedding/types.hpp"

namespace compass {

inline constexpr double kLayoutBox = 10.0;
inline constexpr std::size_t kMinSpectralPoints = 8;

/// Spectral layout from the normalized Laplacian's two smallest nontrivial
/// eigenvectors, rescaled per axis onto [-10, 10]. Disconnected components are
/// embedded separately and tiled on a grid so they never overlap. Components
/// with fewer than 8 points, or whose eigensolve fails, get seeded uniform
/// coordinates instead.
std::vector<Point2> initialize_layout(const FuzzyGraph& graph, std::uint64_t seed);

/// Seeded uniform coordinates in [-10, 10]^2.
std::vector<Point2> random_layout(std::size_t n, std::uint64_t seed);

/// Connected-component label per vertex; labels are assigned in order of each
/// component's smallest vertex.
std::vector<std::uint32_t> connected_components(const FuzzyGraph& graph, std::uint32_t* count);

}  // namespace compass
