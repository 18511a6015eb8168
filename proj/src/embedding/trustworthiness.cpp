#include "compass/embedding/trustworthiness.hpp"

#include <algorithm>
#include <numeric>

#include "compass/core/error.hpp"
#include "compass/embedding/distance.hpp"

namespace compass {

namespace {

void check(const EmbeddingMatrix& high, std::span<const Point2> low, std::size_t k) {
    const std::size_t n = high.rows();
    require(low.size() == n, ErrorKind::invalid_argument,
            "trustworthiness: layout and data sizes differ");
    require(k >= 1 && 2 * n > 3 * k + 1, ErrorKind::invalid_argument,
            "trustworthiness: k too large for n");
}

double normalizer(std::size_t n, std::size_t k) {
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return 2.0 / (nd * kd * (2.0 * nd - 3.0 * kd - 1.0));
}

inline double low_dist2(const Point2& p, const Point2& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return dx * dx + dy * dy;
}

// Penalty of row i: sum over low-d neighbors outside the high-d top k of (rank - k).
double row_penalty(const EmbeddingMatrix& high, Metric metric, std::span<const Point2> low,
                   std::size_t k, std::size_t i, std::vector<std::pair<double, std::uint32_t>>& buf,
                   std::vector<std::uint32_t>& rank) {
    const std::size_t n = high.rows();
    buf.clear();
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) buf.emplace_back(distance(metric, high.row(i), high.row(j)), static_cast<std::uint32_t>(j));
    }
    std::sort(buf.begin(), buf.end());
    for (std::size_t r = 0; r < buf.size(); ++r) rank[buf[r].second] = static_cast<std::uint32_t>(r + 1);

    buf.clear();
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) buf.emplace_back(low_dist2(low[i], low[j]), static_cast<std::uint32_t>(j));
    }
    std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
    double penalty = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        const auto rh = rank[buf[r].second];
        if (rh > k) penalty += static_cast<double>(rh - k);
    }
    return penalty;
}

}  // namespace

double trustworthiness(const EmbeddingMatrix& high, Metric metric, std::span<const Point2> low,
                       std::size_t k) {
    check(high, low, k);
    const std::size_t n = high.rows();
    std::vector<double> penalties(n, 0.0);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
    {
        std::vector<std::pair<double, std::uint32_t>> buf;
        buf.reserve(n);
        std::vector<std::uint32_t> rank(n, 0);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            penalties[static_cast<std::size_t>(i)] =
                row_penalty(high, metric, low, k, static_cast<std::size_t>(i), buf, rank);
        }
    }
    // Fixed-order reduction keeps the result independent of thread count.
    const double total = std::accumulate(penalties.begin(), penalties.end(), 0.0);
    return 1.0 - normalizer(n, k) * total;
}

double trustworthiness_serial(const EmbeddingMatrix& high, Metric metric,
                              std::span<const Point2> low, std::size_t k) {
    check(high, low, k);
    const std::size_t n = high.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Full high-d ordering of every other point.
        std::vector<std::uint32_t> order;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) order.push_back(static_cast<std::uint32_t>(j));
        }
        std::vector<double> dh(n, 0.0), dl(n, 0.0);
        for (auto j : order) {
            dh[j] = distance(metric, high.row(i), high.row(j));
            dl[j] = low_dist2(low[i], low[j]);
        }
        auto by = [&](const std::vector<double>& d) {
            auto o = order;
            std::stable_sort(o.begin(), o.end(), [&](auto x, auto y) { return d[x] < d[y]; });
            return o;
        };
        const auto high_order = by(dh);
        const auto low_order = by(dl);
        for (std::size_t r = 0; r < k; ++r) {
            const auto j = low_order[r];
            const auto pos = static_cast<std::size_t>(
                std::find(high_order.begin(), high_order.end(), j) - high_order.begin());
            const std::size_t rank = pos + 1;
            if (rank > k) total += static_cast<double>(rank - k);
        }
    }
    return 1.0 - normalizer(n, k) * total;
}

}  // namespace compass
