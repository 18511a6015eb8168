#include "compass/embedding/knn.hpp"

#include <algorithm>
#include <numeric>

#include "compass/core/error.hpp"
#include "compass/embedding/distance.hpp"

namespace compass {

KnnResult knn_exact(std::span<const float> query, const EmbeddingMatrix& corpus, std::size_t k,
                    Metric metric, std::optional<std::size_t> exclude) {
    const std::size_t n = corpus.rows();
    const std::size_t available = n - (exclude && *exclude < n ? 1 : 0);
    require(k >= 1 && k <= available, ErrorKind::invalid_argument,
            "k = " + std::to_string(k) + " out of range for " + std::to_string(available) +
                " candidates");
    require(query.size() == corpus.dim(), ErrorKind::invalid_argument,
            "dimension mismatch: query has " + std::to_string(query.size()) +
                " values, corpus has " + std::to_string(corpus.dim()));

    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(available);
    for (std::size_t j = 0; j < n; ++j) {
        if (exclude && *exclude == j) continue;
        scored.emplace_back(distance(metric, query, corpus.row(j)), static_cast<std::uint32_t>(j));
    }
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());

    KnnResult out;
    out.indices.reserve(k);
    out.distances.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        out.distances.push_back(scored[j].first);
        out.indices.push_back(scored[j].second);
    }
    return out;
}

KnnGraph knn_graph_serial(const EmbeddingMatrix& corpus, std::size_t k, Metric metric) {
    KnnGraph g;
    g.n = corpus.rows();
    g.k = k;
    g.indices.reserve(g.n * k);
    g.distances.reserve(g.n * k);
    for (std::size_t i = 0; i < g.n; ++i) {
        auto r = knn_exact(corpus.row(i), corpus, k, metric, i);
        g.indices.insert(g.indices.end(), r.indices.begin(), r.indices.end());
        g.distances.insert(g.distances.end(), r.distances.begin(), r.distances.end());
    }
    return g;
}

}  // namespace compass
