#include <doctest.h>

#include <cmath>

#include "compass/core/error.hpp"
#include "compass/embedding/model_json.hpp"
#include "compass/embedding/trustworthiness.hpp"
#include "compass/embedding/umap.hpp"
#include "compass/embedding/layout_init.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace compass;
using namespace compass::testing;

namespace {

Point2 centroid(const std::vector<Point2>& pts, const std::vector<int>& labels, int c) {
    Point2 s;
    int n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (labels[i] != c) continue;
        s.x += pts[i].x;
        s.y += pts[i].y;
        ++n;
    }
    return {s.x / n, s.y / n};
}

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST_CASE("umap_fit composes the pipeline and is deterministic") {
    const auto set = gaussian_clusters(3, 40, 20, 8.0, 3);
    UmapParams params;
    params.seed = 7;
    const auto m1 = umap_fit(numbered_ids(120, "p"), set.vectors, params);
    const auto m2 = umap_fit(numbered_ids(120, "p"), set.vectors, params);
    CHECK(m1 == m2);
    CHECK(m1.coords.size() == 120);
    CHECK_NOTHROW(m1.validate());
    CHECK(m1.knn.k == 15);

    params.seed = 8;
    const auto m3 = umap_fit(numbered_ids(120, "p"), set.vectors, params);
    CHECK(m3.coords != m1.coords);
}

TEST_CASE("umap_fit input errors") {
    UmapParams params;
    CHECK_THROWS_AS(umap_fit(numbered_ids(15, "p"), random_matrix(15, 4, 1), params), Error);
    CHECK_THROWS_AS(umap_fit(numbered_ids(10, "p"), random_matrix(20, 4, 1), params), Error);
    params.n_neighbors = 1;
    CHECK_THROWS_AS(umap_fit(numbered_ids(20, "p"), random_matrix(20, 4, 1), params), Error);
}

TEST_CASE("3 Gaussian clusters: trustworthiness >= 0.95 and held-out points land in their cluster") {
    const auto set = low_rank_gaussian_clusters(3, 101, 50, 2, 1.0, 0.2, 10.0, 11);
    // Last point of each cluster is held out.
    std::vector<std::vector<float>> train_rows, test_rows;
    std::vector<int> train_labels, test_labels;
    for (std::size_t i = 0; i < set.vectors.rows(); ++i) {
        auto r = set.vectors.row(i);
        if (i % 101 == 100) {
            test_rows.emplace_back(r.begin(), r.end());
            test_labels.push_back(set.labels[i]);
        } else {
            train_rows.emplace_back(r.begin(), r.end());
            train_labels.push_back(set.labels[i]);
        }
    }
    const auto train = EmbeddingMatrix::from_rows(train_rows);
    const auto test = EmbeddingMatrix::from_rows(test_rows);
    UmapParams params;
    params.seed = 2;
    const auto model = umap_fit(numbered_ids(train.rows(), "t"), train, params);
    CHECK(trustworthiness(train, Metric::cosine, model.coords, 15) >= 0.95);

    const auto placed = umap_transform(model, test);
    for (std::size_t q = 0; q < placed.size(); ++q) {
        const int own = test_labels[q];
        const double d_own = dist(placed[q], centroid(model.coords, train_labels, own));
        for (int c = 0; c < 3; ++c) {
            if (c != own) CHECK(d_own < dist(placed[q], centroid(model.coords, train_labels, c)));
        }
    }
}

TEST_CASE("umap_transform: duplicate of a training vector initializes on its twin") {
    const auto set = gaussian_clusters(2, 30, 10, 6.0, 5);
    UmapParams params;
    const auto model = umap_fit(numbered_ids(60, "p"), set.vectors, params);
    EmbeddingMatrix q(3, 10);
    for (std::size_t i = 0; i < 3; ++i) {
        auto src = model.training.row(i * 17);
        std::copy(src.begin(), src.end(), q.row(i).begin());
    }
    const auto before = model;
    const auto r = umap_transform_detailed(model, q);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.initial[i] == model.coords[i * 17]);
    CHECK(model == before);  // transform never mutates the model
    CHECK(umap_transform(model, q) == r.coords);
}

TEST_CASE("transform_initialization: equidistant query starts at the midpoint") {
    const std::vector<Point2> coords{{0.0, 0.0}, {4.0, 2.0}};
    const std::vector<std::uint32_t> nbrs{0, 1};
    const std::vector<double> dists{0.5, 0.5};
    const std::vector<double> w{1.0, 1.0};
    const auto p = transform_initialization(coords, nbrs, dists, w);
    CHECK(p == Point2{2.0, 1.0});
}

TEST_CASE("umap_transform rejects dimension mismatch") {
    const auto model = umap_fit(numbered_ids(40, "p"), random_matrix(40, 6, 3), UmapParams{});
    CHECK_THROWS_AS(umap_transform(model, random_matrix(2, 7, 1)), Error);
    CHECK(umap_transform(model, EmbeddingMatrix{}).empty());
}

TEST_CASE("trustworthiness: parallel kernel, serial reference and definition agree") {
    const auto set = gaussian_clusters(3, 30, 12, 5.0, 8);
    const auto low = random_layout(90, 3);
    for (Metric m : {Metric::cosine, Metric::euclidean}) {
        const double fast = trustworthiness(set.vectors, m, low, 7);
        CHECK(fast == trustworthiness_serial(set.vectors, m, low, 7));
        CHECK(fast == doctest::Approx(oracle_trustworthiness(set.vectors, m, low, 7)).epsilon(1e-12));
    }
    // A layout equal to the data's own first two coordinates of a 2-d set is perfect.
    const auto flat = random_matrix(50, 2, 4);
    std::vector<Point2> same;
    for (std::size_t i = 0; i < 50; ++i) same.push_back({flat.row(i)[0], flat.row(i)[1]});
    CHECK(trustworthiness(flat, Metric::euclidean, same, 5) == doctest::Approx(1.0));
}

TEST_CASE("model JSON round-trip is lossless") {
    const auto model = umap_fit(numbered_ids(40, "p"), random_matrix(40, 6, 31), UmapParams{});
    const auto j = to_json(model);
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == model);
    CHECK(to_json(back).dump() == j.dump());
}

TEST_CASE("model JSON load rejects a broken invariant") {
    const auto model = umap_fit(numbered_ids(40, "p"), random_matrix(40, 6, 31), UmapParams{});
    auto j = to_json(model);
    j["coords"].erase(0);
    CHECK_THROWS_AS(model_from_json(j), Error);
    auto k = to_json(model);
    k["a"] = 0.1;
    CHECK_THROWS_AS(model_from_json(k), Error);
}
