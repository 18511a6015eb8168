#include <algorithm>
#include <cmath>

#include "compass/core/error.hpp"
#include "compass/embedding/distance.hpp"
#include "compass/embedding/knn.hpp"

namespace compass {

KnnGraph knn_graph(const EmbeddingMatrix& corpus, std::size_t k, Metric metric) {
    const std::size_t n = corpus.rows();
    require(k >= 1 && n >= 1 && k <= n - 1, ErrorKind::invalid_argument,
            "k = " + std::to_string(k) + " out of range for " + std::to_string(n) + " points");

    std::vector<double> norms(n);
    if (metric == Metric::cosine) {
        for (std::size_t i = 0; i < n; ++i) {
            norms[i] = squared_norm(corpus.row(i));
            require(norms[i] > 0.0, ErrorKind::invalid_argument,
                    "row " + std::to_string(i) + " has zero norm (corrupt embedding?)");
        }
    }

    KnnGraph g;
    g.n = n;
    g.k = k;
    g.indices.resize(n * k);
    g.distances.resize(n * k);

    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
    {
        std::vector<std::pair<double, std::uint32_t>> scored(n - 1);
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const auto qi = corpus.row(i);
            std::size_t c = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d =
                    metric == Metric::cosine
                        ? cosine_from_parts(dot_product(qi, corpus.row(j)), norms[i], norms[j])
                        : std::sqrt(squared_euclidean(qi, corpus.row(j)));
                scored[c++] = {d, static_cast<std::uint32_t>(j)};
            }
            std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                              scored.end());
            for (std::size_t j = 0; j < k; ++j) {
                g.distances[i * k + j] = scored[j].first;
                g.indices[i * k + j] = scored[j].second;
            }
        }
    }
    return g;
}

}  // namespace compass
