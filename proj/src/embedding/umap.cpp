#include "compass/embedding/umap.hpp"

#include <cmath>

#include "compass/core/error.hpp"
#include "compass/core/rng.hpp"
#include "compass/embedding/curve.hpp"
#include "compass/embedding/fuzzy_graph.hpp"
#include "compass/embedding/knn.hpp"
#include "compass/embedding/layout_init.hpp"
#include "compass/embedding/optimize.hpp"
#include "compass/embedding/smooth_knn.hpp"

namespace compass {

namespace {
constexpr std::uint64_t kFitStream = 0x666974ULL;             // "fit"
constexpr std::uint64_t kTransformStream = 0x7472616E73ULL;   // "trans"
// Transform steps at a quarter of the fit learning rate, as the reference implementation does.
constexpr double kTransformLearningRateScale = 0.25;
}  // namespace

void UmapParams::validate() const {
    require(n_neighbors >= 2, ErrorKind::invalid_argument, "n_neighbors must be >= 2");
    require(spread > 0.0 && std::isfinite(spread), ErrorKind::invalid_argument,
            "spread must be positive");
    require(min_dist >= 0.0 && min_dist < 3.0 * spread, ErrorKind::invalid_argument,
            "min_dist must lie in [0, 3 * spread)");
    require(n_epochs > 0, ErrorKind::invalid_argument, "n_epochs must be positive");
    require(negative_sample_rate > 0, ErrorKind::invalid_argument,
            "negative_sample_rate must be positive");
    require(initial_learning_rate > 0.0 && std::isfinite(initial_learning_rate),
            ErrorKind::invalid_argument, "initial_learning_rate must be positive");
}

void UmapModel::validate() const {
    params.validate();
    const std::size_t n = training_ids.size();
    require(training.rows() == n, ErrorKind::validation,
            "model training vectors do not match training_ids");
    require(coords.size() == n, ErrorKind::validation, "model coords row count != training_ids");
    require(knn.n == n && knn.k == static_cast<std::size_t>(params.n_neighbors),
            ErrorKind::validation, "model knn graph shape does not match params");
    require(fuzzy.n == n, ErrorKind::validation, "model fuzzy graph size mismatch");
    knn.validate();
    fuzzy.validate();
    for (const auto& p : coords) {
        require(std::isfinite(p.x) && std::isfinite(p.y), ErrorKind::validation,
                "model coords must be finite");
    }
    const auto ab = find_ab_params(params.min_dist, params.spread);
    require(ab.a == a && ab.b == b, ErrorKind::validation,
            "model curve parameters (a, b) are inconsistent with min_dist/spread");
}

UmapModel umap_fit(std::vector<std::string> ids, EmbeddingMatrix vectors, const UmapParams& params) {
    params.validate();
    const auto k = static_cast<std::size_t>(params.n_neighbors);
    require(vectors.rows() >= k + 1, ErrorKind::invalid_argument,
            "umap_fit needs at least n_neighbors + 1 = " + std::to_string(k + 1) +
                " vectors, got " + std::to_string(vectors.rows()));
    require(ids.size() == vectors.rows(), ErrorKind::invalid_argument,
            "umap_fit: id count does not match vector count");
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        for (float v : vectors.row(i)) {
            require(std::isfinite(v), ErrorKind::invalid_argument,
                    "vector '" + ids[i] + "' has a non-finite value");
        }
    }

    UmapModel model;
    model.params = params;
    model.training_ids = std::move(ids);
    model.training = std::move(vectors);
    model.knn = knn_graph(model.training, k, params.metric);
    model.fuzzy = build_fuzzy_graph(model.knn);

    const auto curve = find_ab_params(params.min_dist, params.spread);
    model.a = curve.a;
    model.b = curve.b;

    auto init = initialize_layout(model.fuzzy, params.seed);
    const auto edges = edges_from_graph(model.fuzzy);
    OptimizeOptions opts;
    opts.n_epochs = params.n_epochs;
    opts.negative_sample_rate = params.negative_sample_rate;
    opts.initial_learning_rate = params.initial_learning_rate;
    opts.curve = curve;
    opts.seed = mix64(params.seed ^ kFitStream);
    const std::vector<std::uint8_t> movable(model.size(), 1);
    model.coords = optimize_layout(edges, std::move(init), opts, movable);
    return model;
}

Point2 transform_initialization(std::span<const Point2> train_coords,
                                std::span<const std::uint32_t> neighbors,
                                std::span<const double> distances,
                                std::span<const double> weights) {
    require(!neighbors.empty() && neighbors.size() == distances.size() &&
                neighbors.size() == weights.size(),
            ErrorKind::invalid_argument, "transform_initialization: inconsistent neighbor rows");
    Point2 acc;
    double total = 0.0;
    const bool duplicate = distances.front() == 0.0;
    for (std::size_t j = 0; j < neighbors.size(); ++j) {
        const double w = duplicate ? (distances[j] == 0.0 ? 1.0 : 0.0) : weights[j];
        if (w == 0.0) continue;
        const Point2& p = train_coords[neighbors[j]];
        acc.x += w * p.x;
        acc.y += w * p.y;
        total += w;
    }
    return {acc.x / total, acc.y / total};
}

TransformResult umap_transform_detailed(const UmapModel& model, const EmbeddingMatrix& queries) {
    TransformResult out;
    if (queries.rows() == 0) return out;
    require(queries.dim() == model.dim(), ErrorKind::invalid_argument,
            "dimension mismatch: model expects " + std::to_string(model.dim()) +
                " values, got " + std::to_string(queries.dim()));

    const std::size_t n_train = model.size();
    const std::size_t m = queries.rows();
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(model.params.n_neighbors), n_train);
    const double target = smooth_knn_target(k);

    std::vector<Point2> layout = model.coords;
    layout.reserve(n_train + m);
    std::vector<LayoutEdge> edges;
    edges.reserve(m * k);
    out.initial.reserve(m);

    for (std::size_t q = 0; q < m; ++q) {
        const auto nn = knn_exact(queries.row(q), model.training, k, model.params.metric);
        const auto cal = calibrate_smooth_knn(nn.distances, target);
        std::vector<double> w(k);
        for (std::size_t j = 0; j < k; ++j) {
            w[j] = std::exp(-std::max(0.0, nn.distances[j] - cal.rho) / cal.sigma);
        }
        const Point2 init = transform_initialization(model.coords, nn.indices, nn.distances, w);
        out.initial.push_back(init);
        layout.push_back(init);
        const auto head = static_cast<std::uint32_t>(n_train + q);
        for (std::size_t j = 0; j < k; ++j) {
            if (w[j] > 0.0) edges.push_back({head, nn.indices[j], w[j]});
        }
    }

    std::vector<std::uint8_t> movable(n_train + m, 0);
    std::fill(movable.begin() + static_cast<std::ptrdiff_t>(n_train), movable.end(), 1);

    OptimizeOptions opts;
    opts.n_epochs = transform_epochs(model.params.n_epochs);
    opts.negative_sample_rate = model.params.negative_sample_rate;
    opts.initial_learning_rate = model.params.initial_learning_rate * kTransformLearningRateScale;
    opts.curve = {model.a, model.b};
    opts.seed = mix64(model.params.seed ^ kTransformStream);
    layout = optimize_layout(edges, std::move(layout), opts, movable);

    out.coords.assign(layout.begin() + static_cast<std::ptrdiff_t>(n_train), layout.end());
    return out;
}

std::vector<Point2> umap_transform(const UmapModel& model, const EmbeddingMatrix& queries) {
    return umap_transform_detailed(model, queries).coords;
}

}  // namespace compass
