#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "compass/embedding/curve.hpp"
#include "compass/embedding/types.hpp"

namespace compass {

struct LayoutEdge {
    std::uint32_t head = 0;
    std::uint32_t tail = 0;
    double weight = 0.0;
};

struct OptimizeOptions {
    int n_epochs = 200;
    int negative_sample_rate = 5;
    double initial_learning_rate = 1.0;
    double repulsion_strength = 1.0;
    CurveParams curve;
    std::uint64_t seed = 0;
};

inline constexpr double kGradientClip = 4.0;

/// Stochastic layout optimization. Each edge is sampled with period
/// max_weight / weight epochs (edges lighter than max_weight / n_epochs are
/// never sampled); every sample applies an attractive step along the edge and
/// negative_sample_rate repulsive steps against uniformly drawn vertices.
/// Per-coordinate steps are clipped to [-4, 4] and the learning rate decays
/// linearly to zero. Rows whose mask entry is 0 are never written.
std::vector<Point2> optimize_layout(std::span<const LayoutEdge> edges, std::vector<Point2> coords,
                                    const OptimizeOptions& options,
                                    std::span<const std::uint8_t> movable);

/// Both directions of every stored entry of the symmetric graph.
std::vector<LayoutEdge> edges_from_graph(const FuzzyGraph& graph);

}  // namespace compass
