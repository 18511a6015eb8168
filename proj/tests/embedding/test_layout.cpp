#include <doctest.h>

#include <cmath>

#include "compass/core/error.hpp"
#include "compass/embedding/curve.hpp"
#include "compass/embedding/fuzzy_graph.hpp"
#include "compass/embedding/knn.hpp"
#include "compass/embedding/layout_init.hpp"
#include "compass/embedding/optimize.hpp"
#include "support/synthetic.hpp"

using namespace compass;

namespace {

// Undirected graph from an explicit edge list, all weights 1.
FuzzyGraph graph_from_edges(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    FuzzyGraph g;
    g.n = n;
    g.row_ptr.push_back(0);
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        for (auto c : row) {
            g.cols.push_back(c);
            g.weights.push_back(1.0);
        }
        g.row_ptr.push_back(g.cols.size());
    }
    g.rho.assign(n, 0.0);
    g.sigma.assign(n, 1.0);
    return g;
}

bool in_box(const std::vector<Point2>& pts) {
    return std::all_of(pts.begin(), pts.end(), [](const Point2& p) {
        return p.x >= -10.0 && p.x <= 10.0 && p.y >= -10.0 && p.y <= 10.0;
    });
}

}  // namespace

TEST_CASE("initialize_layout: tiny graph falls back to seeded uniform") {
    const auto g = graph_from_edges(3, {{0, 1}, {1, 2}});
    const auto a = initialize_layout(g, 5);
    REQUIRE(a.size() == 3);
    CHECK(in_box(a));
    CHECK(a == initialize_layout(g, 5));
    CHECK(a != initialize_layout(g, 6));
}

TEST_CASE("initialize_layout: spectral layout is deterministic and boxed") {
    const auto data = testing::random_matrix(120, 10, 4);
    const auto g = build_fuzzy_graph(knn_graph(data, 10, Metric::euclidean));
    const auto a = initialize_layout(g, 1);
    const auto b = initialize_layout(g, 1);
    CHECK(a == b);
    CHECK(in_box(a));
    // spans the box on both axes
    auto [mnx, mxx] = std::minmax_element(a.begin(), a.end(), [](auto p, auto q) { return p.x < q.x; });
    CHECK(mnx->x == doctest::Approx(-10.0));
    CHECK(mxx->x == doctest::Approx(10.0));
}

TEST_CASE("initialize_layout: disconnected components do not overlap") {
    // Two rings of 10 vertices each, no edges between them.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t c = 0; c < 2; ++c) {
        for (std::uint32_t i = 0; i < 10; ++i) edges.emplace_back(c * 10 + i, c * 10 + (i + 1) % 10);
    }
    const auto g = graph_from_edges(20, edges);
    std::uint32_t count = 0;
    const auto labels = connected_components(g, &count);
    CHECK(count == 2);
    CHECK(labels[0] == 0);
    CHECK(labels[15] == 1);

    const auto coords = initialize_layout(g, 9);
    CHECK(in_box(coords));
    // Bounding boxes of the two components are disjoint.
    auto box = [&](std::uint32_t c) {
        double lo = 1e9, hi = -1e9;
        for (std::uint32_t i = c * 10; i < c * 10 + 10; ++i) {
            lo = std::min(lo, coords[i].x);
            hi = std::max(hi, coords[i].x);
        }
        return std::pair{lo, hi};
    };
    const auto [lo0, hi0] = box(0);
    const auto [lo1, hi1] = box(1);
    CHECK((hi0 < lo1 || hi1 < lo0));
    for (std::uint32_t i = 0; i < 10; ++i) {
        for (std::uint32_t j = 10; j < 20; ++j) CHECK(coords[i] != coords[j]);
    }
}

TEST_CASE("optimize_layout: frozen mask is the identity") {
    const auto data = testing::random_matrix(60, 6, 21);
    const auto g = build_fuzzy_graph(knn_graph(data, 8, Metric::euclidean));
    const auto init = initialize_layout(g, 3);
    OptimizeOptions opts;
    opts.curve = find_ab_params(0.5, 1.0);
    opts.seed = 17;
    const std::vector<std::uint8_t> frozen(init.size(), 0);
    const auto out = optimize_layout(edges_from_graph(g), init, opts, frozen);
    CHECK(out == init);
}

TEST_CASE("optimize_layout: frozen rows never move, movable rows do") {
    const auto data = testing::random_matrix(60, 6, 22);
    const auto g = build_fuzzy_graph(knn_graph(data, 8, Metric::euclidean));
    const auto init = initialize_layout(g, 3);
    std::vector<std::uint8_t> mask(init.size(), 0);
    for (std::size_t i = 0; i < mask.size(); i += 3) mask[i] = 1;
    OptimizeOptions opts;
    opts.curve = find_ab_params(0.5, 1.0);
    opts.seed = 5;
    const auto out = optimize_layout(edges_from_graph(g), init, opts, mask);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (!mask[i]) {
            CHECK(out[i] == init[i]);
        } else if (!(out[i] == init[i])) {
            ++moved;
        }
    }
    CHECK(moved > 0);
}

TEST_CASE("optimize_layout: two linked points attract") {
    const std::vector<LayoutEdge> edges{{0, 1, 1.0}, {1, 0, 1.0}};
    const std::vector<Point2> init{{-5.0, 0.0}, {5.0, 0.0}};
    OptimizeOptions opts;
    opts.curve = find_ab_params(0.5, 1.0);
    opts.seed = 1;
    opts.n_epochs = 100;
    const std::vector<std::uint8_t> mask{1, 1};
    const auto out = optimize_layout(edges, init, opts, mask);
    const double before = std::hypot(init[0].x - init[1].x, init[0].y - init[1].y);
    const double after = std::hypot(out[0].x - out[1].x, out[0].y - out[1].y);
    CHECK(after < before);
}

TEST_CASE("optimize_layout: deterministic for a fixed seed") {
    const auto data = testing::random_matrix(80, 6, 23);
    const auto g = build_fuzzy_graph(knn_graph(data, 8, Metric::euclidean));
    const auto init = initialize_layout(g, 3);
    OptimizeOptions opts;
    opts.curve = find_ab_params(0.5, 1.0);
    opts.seed = 99;
    const std::vector<std::uint8_t> mask(init.size(), 1);
    const auto edges = edges_from_graph(g);
    CHECK(optimize_layout(edges, init, opts, mask) == optimize_layout(edges, init, opts, mask));
}

TEST_CASE("optimize_layout: mask length must match") {
    const std::vector<Point2> init{{0, 0}, {1, 1}};
    const std::vector<std::uint8_t> mask{1};
    CHECK_THROWS_AS(optimize_layout({}, init, OptimizeOptions{}, mask), Error);
}
