#include "compass/embedding/layout_init.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "compass/core/rng.hpp"

namespace compass {

namespace {

constexpr std::uint64_t kInitStream = 0x696E6974ULL;  // "init"

// Rescales each axis independently onto [-box, box]; constant axes map to 0.
void fit_to_box(std::vector<Point2>& pts, double box) {
    if (pts.empty()) return;
    double lo_x = pts[0].x, hi_x = pts[0].x, lo_y = pts[0].y, hi_y = pts[0].y;
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double sx = hi_x > lo_x ? 2.0 * box / (hi_x - lo_x) : 0.0;
    const double sy = hi_y > lo_y ? 2.0 * box / (hi_y - lo_y) : 0.0;
    for (auto& p : pts) {
        p.x = sx > 0.0 ? std::clamp((p.x - lo_x) * sx - box, -box, box) : 0.0;
        p.y = sy > 0.0 ? std::clamp((p.y - lo_y) * sy - box, -box, box) : 0.0;
    }
}

std::vector<Point2> uniform_points(std::size_t n, std::uint64_t seed, double box) {
    SplitMix64 rng(seed);
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        p.x = rng.uniform(-box, box);
        p.y = rng.uniform(-box, box);
    }
    return pts;
}

// Deterministic eigenvector sign: the entry of largest magnitude is positive.
void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    if (v[best] < 0.0) v = -v;
}

// Spectral coordinates for the subgraph on `members` (one connected component).
// Returns false if the eigensolve fails or the component is too small.
bool spectral_component(const FuzzyGraph& graph, const std::vector<std::uint32_t>& members,
                        std::vector<Point2>& out) {
    const auto m = static_cast<Eigen::Index>(members.size());
    if (members.size() < kMinSpectralPoints) return false;

    std::vector<std::int64_t> local(graph.n, -1);
    for (Eigen::Index i = 0; i < m; ++i) local[members[static_cast<std::size_t>(i)]] = i;

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto gi = members[static_cast<std::size_t>(i)];
        for (std::size_t e = graph.row_ptr[gi]; e < graph.row_ptr[gi + 1]; ++e) {
            const auto lj = local[graph.cols[e]];
            if (lj >= 0) w(i, lj) = graph.weights[e];
        }
    }
    Eigen::VectorXd inv_sqrt_deg(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double deg = w.row(i).sum();
        if (deg <= 0.0) return false;
        inv_sqrt_deg[i] = 1.0 / std::sqrt(deg);
    }
    Eigen::MatrixXd lap = -(inv_sqrt_deg.asDiagonal() * w * inv_sqrt_deg.asDiagonal());
    lap.diagonal().array() += 1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) return false;
    // Eigenvalues ascend; column 0 is the trivial D^1/2 1 direction.
    Eigen::VectorXd v1 = solver.eigenvectors().col(1);
    Eigen::VectorXd v2 = solver.eigenvectors().col(2);
    if (!v1.allFinite() || !v2.allFinite()) return false;
    fix_sign(v1);
    fix_sign(v2);

    out.resize(members.size());
    for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = {v1[i], v2[i]};
    return true;
}

}  // namespace

std::vector<std::uint32_t> connected_components(const FuzzyGraph& graph, std::uint32_t* count) {
    constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(graph.n, kUnset);
    std::uint32_t next = 0;
    std::vector<std::uint32_t> stack;
    for (std::size_t s = 0; s < graph.n; ++s) {
        if (label[s] != kUnset) continue;
        label[s] = next;
        stack.push_back(static_cast<std::uint32_t>(s));
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (std::size_t e = graph.row_ptr[v]; e < graph.row_ptr[v + 1]; ++e) {
                const auto u = graph.cols[e];
                if (label[u] == kUnset) {
                    label[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    if (count) *count = next;
    return label;
}

std::vector<Point2> random_layout(std::size_t n, std::uint64_t seed) {
    return uniform_points(n, mix64(seed ^ kInitStream), kLayoutBox);
}

std::vector<Point2> initialize_layout(const FuzzyGraph& graph, std::uint64_t seed) {
    const std::size_t n = graph.n;
    if (n < kMinSpectralPoints) return random_layout(n, seed);

    std::uint32_t n_components = 0;
    const auto label = connected_components(graph, &n_components);
    std::vector<std::vector<std::uint32_t>> members(n_components);
    for (std::size_t i = 0; i < n; ++i) members[label[i]].push_back(static_cast<std::uint32_t>(i));

    // Each component is laid out in its own [-1, 1] cell; cells sit on a grid
    // with a gap of one cell-width between neighbors.
    const auto columns = static_cast<std::uint32_t>(
        std::ceil(std::sqrt(static_cast<double>(n_components))));
    constexpr double kCellPitch = 3.0;

    std::vector<Point2> coords(n);
    for (std::uint32_t c = 0; c < n_components; ++c) {
        std::vector<Point2> local;
        if (!spectral_component(graph, members[c], local)) {
            local = uniform_points(members[c].size(), mix64(seed ^ kInitStream ^ (c + 1ULL)), 1.0);
        }
        fit_to_box(local, 1.0);
        const double ox = n_components > 1 ? kCellPitch * static_cast<double>(c % columns) : 0.0;
        const double oy = n_components > 1 ? kCellPitch * static_cast<double>(c / columns) : 0.0;
        for (std::size_t i = 0; i < members[c].size(); ++i) {
            coords[members[c][i]] = {local[i].x + ox, local[i].y + oy};
        }
    }
    fit_to_box(coords, kLayoutBox);
    return coords;
}

}  // namespace compass
