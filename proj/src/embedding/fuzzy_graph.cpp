#include "compass/embedding/fuzzy_graph.hpp"

#include <algorithm>
#include <cmath>

#include "compass/embedding/smooth_knn.hpp"

namespace compass {

namespace {
struct Entry {
    std::uint32_t col;
    double weight;
};

FuzzyGraph build(const KnnGraph& knn, bool parallel) {
    knn.validate();
    const std::size_t n = knn.n;
    const double target = smooth_knn_target(knn.k);

    FuzzyGraph g;
    g.n = n;
    g.rho.resize(n);
    g.sigma.resize(n);

    // Directed memberships, one sorted row per point.
    std::vector<std::vector<Entry>> directed(n);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto dist = knn.row_distances(i);
        const auto cal = calibrate_smooth_knn(dist, target);
        g.rho[i] = cal.rho;
        g.sigma[i] = cal.sigma;
        auto& row = directed[i];
        const auto idx = knn.neighbors(i);
        for (std::size_t j = 0; j < knn.k; ++j) {
            const double w = std::exp(-std::max(0.0, dist[j] - cal.rho) / cal.sigma);
            if (w > 0.0) row.push_back({idx[j], w});
        }
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    }

    auto directed_weight = [&](std::size_t i, std::uint32_t j) {
        const auto& row = directed[i];
        auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Entry& e, std::uint32_t c) { return e.col < c; });
        return (it != row.end() && it->col == j) ? it->weight : 0.0;
    };

    // Union of the directed pattern and its transpose.
    std::vector<std::vector<std::uint32_t>> pattern(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : directed[i]) {
            pattern[i].push_back(e.col);
            pattern[e.col].push_back(static_cast<std::uint32_t>(i));
        }
    }

    g.row_ptr.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& cols = pattern[i];
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        for (std::uint32_t j : cols) {
            const double w = fuzzy_union(directed_weight(i, j), directed_weight(j, i));
            g.cols.push_back(j);
            g.weights.push_back(std::min(w, 1.0));
        }
        g.row_ptr[i + 1] = g.cols.size();
    }
    return g;
}

}  // namespace

FuzzyGraph build_fuzzy_graph(const KnnGraph& knn) { return build(knn, true); }

FuzzyGraph build_fuzzy_graph_serial(const KnnGraph& knn) { return build(knn, false); }

}  // namespace compass
