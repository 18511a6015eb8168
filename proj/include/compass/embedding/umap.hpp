#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/embedding/types.hpp"

namespace compass {

struct UmapParams {
    int n_neighbors = 15;
    double min_dist = 0.5;
    double spread = 1.0;
    Metric metric = Metric::cosine;
    int n_epochs = 200;
    int negative_sample_rate = 5;
    double initial_learning_rate = 1.0;
    std::uint64_t seed = 42;

    void validate() const;
    bool operator==(const UmapParams&) const = default;
};

/// A fitted projection. Immutable once built; safe for concurrent transforms.
struct UmapModel {
    UmapParams params;
    std::vector<std::string> training_ids;
    EmbeddingMatrix training;
    KnnGraph knn;
    FuzzyGraph fuzzy;
    std::vector<Point2> coords;
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const noexcept { return training_ids.size(); }
    std::size_t dim() const noexcept { return training.dim(); }

    void validate() const;
    bool operator==(const UmapModel&) const = default;
};

UmapModel umap_fit(std::vector<std::string> ids, EmbeddingMatrix vectors, const UmapParams& params);

struct TransformResult {
    std::vector<Point2> initial;  // membership-weighted neighbor means
    std::vector<Point2> coords;   // after constrained optimization
};

/// Places new vectors into a fitted layout without touching the model.
std::vector<Point2> umap_transform(const UmapModel& model, const EmbeddingMatrix& queries);
TransformResult umap_transform_detailed(const UmapModel& model, const EmbeddingMatrix& queries);

/// Weighted mean of neighbor coordinates. If any neighbor sits at distance 0,
/// only those zero-distance neighbors contribute (an exact duplicate lands on
/// its twin).
Point2 transform_initialization(std::span<const Point2> train_coords,
                                std::span<const std::uint32_t> neighbors,
                                std::span<const double> distances,
                                std::span<const double> weights);

inline int transform_epochs(int n_epochs) { return (n_epochs + 2) / 3; }

}  // namespace compass
