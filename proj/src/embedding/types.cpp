#include "compass/embedding/types.hpp"

#include <algorithm>
#include <cmath>

#include "compass/core/error.hpp"

namespace compass {

std::string to_string(Metric metric) {
    return metric == Metric::cosine ? "cosine" : "euclidean";
}

Metric metric_from_string(const std::string& name) {
    if (name == "cosine") return Metric::cosine;
    if (name == "euclidean") return Metric::euclidean;
    fail(ErrorKind::invalid_argument, "unknown metric '" + name + "'");
}

std::string to_string(Modality modality) {
    return modality == Modality::image ? "image" : "text";
}

Modality modality_from_string(const std::string& name) {
    if (name == "image") return Modality::image;
    if (name == "text") return Modality::text;
    fail(ErrorKind::invalid_argument, "unknown modality '" + name + "'");
}

void EmbeddingVector::validate() const {
    require(values.size() >= 2, ErrorKind::validation,
            "embedding '" + id + "' has fewer than 2 values");
    bool nonzero = false;
    for (float v : values) {
        require(std::isfinite(v), ErrorKind::validation,
                "embedding '" + id + "' has a non-finite value");
        nonzero = nonzero || v != 0.0f;
    }
    require(nonzero, ErrorKind::validation, "embedding '" + id + "' has zero norm");
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
    require(data_.size() == rows * dim, ErrorKind::invalid_argument,
            "embedding matrix data does not match its shape");
}

EmbeddingMatrix EmbeddingMatrix::from_rows(std::span<const std::vector<float>> rows) {
    if (rows.empty()) return {};
    const std::size_t dim = rows.front().size();
    EmbeddingMatrix m(rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == dim, ErrorKind::invalid_argument,
                "dimension mismatch: row " + std::to_string(i) + " has " +
                    std::to_string(rows[i].size()) + " values, expected " + std::to_string(dim));
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

void KnnGraph::validate() const {
    require(indices.size() == n * k && distances.size() == n * k, ErrorKind::validation,
            "knn graph arrays do not match n x k");
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = neighbors(i);
        auto dist = row_distances(i);
        for (std::size_t j = 0; j < k; ++j) {
            require(idx[j] < n, ErrorKind::validation, "knn index out of range");
            require(idx[j] != i, ErrorKind::validation,
                    "knn row " + std::to_string(i) + " contains itself");
            require(dist[j] >= 0.0 && std::isfinite(dist[j]), ErrorKind::validation,
                    "knn distance negative or non-finite");
            require(j == 0 || dist[j - 1] <= dist[j], ErrorKind::validation,
                    "knn row " + std::to_string(i) + " is not sorted ascending");
        }
    }
}

double FuzzyGraph::weight(std::size_t i, std::size_t j) const noexcept {
    auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
    if (it == last || *it != j) return 0.0;
    return weights[static_cast<std::size_t>(it - cols.begin())];
}

void FuzzyGraph::validate() const {
    require(row_ptr.size() == n + 1 && row_ptr.front() == 0 && row_ptr.back() == cols.size() &&
                weights.size() == cols.size(),
            ErrorKind::validation, "fuzzy graph CSR arrays are inconsistent");
    require(rho.size() == n && sigma.size() == n, ErrorKind::validation,
            "fuzzy graph calibration arrays do not match n");
    for (std::size_t i = 0; i < n; ++i) {
        require(row_ptr[i] <= row_ptr[i + 1], ErrorKind::validation, "fuzzy graph row_ptr decreases");
        require(sigma[i] > 0.0, ErrorKind::validation, "fuzzy graph sigma must be positive");
        for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
            require(cols[e] < n, ErrorKind::validation, "fuzzy graph column out of range");
            require(e == row_ptr[i] || cols[e - 1] < cols[e], ErrorKind::validation,
                    "fuzzy graph columns not strictly ascending");
            require(weights[e] > 0.0 && weights[e] <= 1.0, ErrorKind::validation,
                    "fuzzy graph weight outside (0, 1]");
            require(weight(cols[e], i) == weights[e], ErrorKind::validation,
                    "fuzzy graph is not symmetric");
        }
    }
}

}  // namespace compass
