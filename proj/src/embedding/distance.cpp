#include "compass/embedding/distance.hpp"

#include <algorithm>
#include <cmath>

#include "compass/core/error.hpp"

namespace compass {

double dot_product(std::span<const float> a, std::span<const float> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

double squared_norm(std::span<const float> a) noexcept { return dot_product(a, a); }

// sqrt(x * x) == x in IEEE arithmetic, so identical inputs give exactly 0.
double cosine_from_parts(double dot, double norm_sq_a, double norm_sq_b) noexcept {
    const double d = 1.0 - dot / std::sqrt(norm_sq_a * norm_sq_b);
    return std::clamp(d, 0.0, 2.0);
}

double squared_euclidean(std::span<const float> a, std::span<const float> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += diff * diff;
    }
    return acc;
}

namespace {
void check_lengths(std::span<const float> a, std::span<const float> b) {
    require(a.size() == b.size(), ErrorKind::invalid_argument,
            "dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}
}  // namespace

double cosine_distance(std::span<const float> a, std::span<const float> b) {
    check_lengths(a, b);
    const double na = squared_norm(a);
    const double nb = squared_norm(b);
    require(na > 0.0 && nb > 0.0, ErrorKind::invalid_argument,
            "cosine distance of a zero-norm vector (corrupt embedding?)");
    return cosine_from_parts(dot_product(a, b), na, nb);
}

double euclidean_distance(std::span<const float> a, std::span<const float> b) {
    check_lengths(a, b);
    return std::sqrt(squared_euclidean(a, b));
}

double distance(Metric metric, std::span<const float> a, std::span<const float> b) {
    return metric == Metric::cosine ? cosine_distance(a, b) : euclidean_distance(a, b);
}

}  // namespace compass
