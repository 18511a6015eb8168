#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "compass/embedding/types.hpp"

namespace compass {

struct KnnResult {
    std::vector<std::uint32_t> indices;
    std::vector<double> distances;
};

/// Exact k nearest neighbors of `query` in `corpus`, ascending by distance with
/// ties broken by lower index. When `exclude` is set that corpus row is skipped
/// (used for self-exclusion when the query is a corpus member).
KnnResult knn_exact(std::span<const float> query, const EmbeddingMatrix& corpus, std::size_t k,
                    Metric metric, std::optional<std::size_t> exclude = std::nullopt);

/// All-points kNN graph, self excluded. OpenMP kernel: rows are independent,
/// so the output is identical to knn_graph_serial for any thread count.
KnnGraph knn_graph(const EmbeddingMatrix& corpus, std::size_t k, Metric metric);

/// Reference implementation: one knn_exact call per row.
KnnGraph knn_graph_serial(const EmbeddingMatrix& corpus, std::size_t k, Metric metric);

}  // namespace compass
