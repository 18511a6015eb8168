#include "compass/embedding/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "compass/core/error.hpp"
#include "compass/core/rng.hpp"

namespace compass {

namespace {

inline double clip(double v) { return std::clamp(v, -kGradientClip, kGradientClip); }

inline double squared_dist(const Point2& p, const Point2& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return dx * dx + dy * dy;
}

}  // namespace

std::vector<LayoutEdge> edges_from_graph(const FuzzyGraph& graph) {
    std::vector<LayoutEdge> edges;
    edges.reserve(graph.nnz());
    for (std::size_t i = 0; i < graph.n; ++i) {
        for (std::size_t e = graph.row_ptr[i]; e < graph.row_ptr[i + 1]; ++e) {
            edges.push_back({static_cast<std::uint32_t>(i), graph.cols[e], graph.weights[e]});
        }
    }
    return edges;
}

std::vector<Point2> optimize_layout(std::span<const LayoutEdge> edges, std::vector<Point2> coords,
                                    const OptimizeOptions& options,
                                    std::span<const std::uint8_t> movable) {
    const std::size_t n = coords.size();
    require(movable.size() == n, ErrorKind::invalid_argument,
            "movable mask length does not match the layout");
    require(options.n_epochs > 0 && options.negative_sample_rate > 0, ErrorKind::invalid_argument,
            "n_epochs and negative_sample_rate must be positive");
    for (const auto& e : edges) {
        require(e.head < n && e.tail < n, ErrorKind::invalid_argument, "edge endpoint out of range");
    }
    if (edges.empty() || std::none_of(movable.begin(), movable.end(), [](auto m) { return m != 0; })) {
        return coords;
    }

    const double a = options.curve.a;
    const double b = options.curve.b;
    const double gamma = options.repulsion_strength;
    const auto n_epochs = options.n_epochs;

    double max_weight = 0.0;
    for (const auto& e : edges) max_weight = std::max(max_weight, e.weight);

    // Sampling schedule; a negative period marks an edge that is never sampled.
    const std::size_t m = edges.size();
    std::vector<double> epochs_per_sample(m, -1.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = edges[i].weight;
        if (w > 0.0 && w >= max_weight / n_epochs) epochs_per_sample[i] = max_weight / w;
    }
    std::vector<double> epochs_per_negative(m);
    for (std::size_t i = 0; i < m; ++i) {
        epochs_per_negative[i] = epochs_per_sample[i] / options.negative_sample_rate;
    }
    std::vector<double> next_sample = epochs_per_sample;
    std::vector<double> next_negative = epochs_per_negative;

    SplitMix64 rng(options.seed);
    double alpha = options.initial_learning_rate;

    for (int epoch = 0; epoch < n_epochs; ++epoch) {
        const double ep = static_cast<double>(epoch);
        for (std::size_t i = 0; i < m; ++i) {
            if (epochs_per_sample[i] <= 0.0 || next_sample[i] > ep) continue;

            const auto j = edges[i].head;
            const auto k = edges[i].tail;
            const bool move_head = movable[j] != 0;
            const bool move_tail = movable[k] != 0;
            Point2& current = coords[j];
            Point2& other = coords[k];

            const double d2 = squared_dist(current, other);
            double grad_coeff = 0.0;
            if (d2 > 0.0) {
                grad_coeff = -2.0 * a * b * std::pow(d2, b - 1.0);
                grad_coeff /= a * std::pow(d2, b) + 1.0;
            }
            const double gx = clip(grad_coeff * (current.x - other.x));
            const double gy = clip(grad_coeff * (current.y - other.y));
            if (move_head) {
                current.x += gx * alpha;
                current.y += gy * alpha;
            }
            if (move_tail) {
                other.x -= gx * alpha;
                other.y -= gy * alpha;
            }
            next_sample[i] += epochs_per_sample[i];

            const auto n_neg = static_cast<int>((ep - next_negative[i]) / epochs_per_negative[i]);
            for (int p = 0; p < n_neg; ++p) {
                const auto r = static_cast<std::uint32_t>(rng.below(n));
                if (!move_head) continue;
                const Point2& neg = coords[r];
                const double nd2 = squared_dist(current, neg);
                double coeff = 0.0;
                if (nd2 > 0.0) {
                    coeff = 2.0 * gamma * b;
                    coeff /= (0.001 + nd2) * (a * std::pow(nd2, b) + 1.0);
                } else if (r == j) {
                    continue;
                }
                // Coincident points are pushed apart by a full clipped step.
                const double nx = coeff > 0.0 ? clip(coeff * (current.x - neg.x)) : kGradientClip;
                const double ny = coeff > 0.0 ? clip(coeff * (current.y - neg.y)) : kGradientClip;
                current.x += nx * alpha;
                current.y += ny * alpha;
            }
            next_negative[i] += n_neg * epochs_per_negative[i];
        }
        alpha = options.initial_learning_rate * (1.0 - (ep + 1.0) / n_epochs);
    }
    return coords;
}

}  // namespace compass
