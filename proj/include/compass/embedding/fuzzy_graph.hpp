#pragma once

#include "compass/embedding/types.hpp"

namespace compass {

/// Directed memberships w_ij = exp(-max(0, d_ij - rho_i) / sigma_i), folded
/// into a symmetric matrix with the probabilistic t-conorm
/// w = w_ij + w_ji - w_ij * w_ji. Zero memberships are not stored.
/// Rows are calibrated in parallel; the result matches the serial reference exactly.
FuzzyGraph build_fuzzy_graph(const KnnGraph& knn);
FuzzyGraph build_fuzzy_graph_serial(const KnnGraph& knn);

inline double fuzzy_union(double w_ij, double w_ji) noexcept { return w_ij + w_ji - w_ij * w_ji; }

}  // namespace compass
