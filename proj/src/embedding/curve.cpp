#include "compass/embedding/curve.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "compass/core/error.hpp"

namespace compass {

namespace {

struct Samples {
    std::vector<double> x;
    std::vector<double> y;
};

Samples target_profile(double min_dist, double spread) {
    Samples s;
    s.x.resize(kCurveSamples);
    s.y.resize(kCurveSamples);
    const double hi = 3.0 * spread;
    for (int i = 0; i < kCurveSamples; ++i) {
        const double d = hi * static_cast<double>(i) / static_cast<double>(kCurveSamples - 1);
        s.x[i] = d;
        s.y[i] = d <= min_dist ? 1.0 : std::exp(-(d - min_dist) / spread);
    }
    return s;
}

double sum_squares(const Samples& s, double a, double b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double r = curve_value({a, b}, s.x[i]) - s.y[i];
        acc += r * r;
    }
    return acc;
}

void check_args(double min_dist, double spread) {
    require(spread > 0.0 && std::isfinite(spread), ErrorKind::invalid_argument,
            "spread must be positive");
    require(min_dist >= 0.0 && min_dist < 3.0 * spread, ErrorKind::invalid_argument,
            "min_dist must lie in [0, 3 * spread)");
}

}  // namespace

CurveParams find_ab_params(double min_dist, double spread) {
    check_args(min_dist, spread);
    const Samples s = target_profile(min_dist, spread);

    double a = 1.0;
    double b = 1.0;
    double cost = sum_squares(s, a, b);
    double lambda = 1e-3;
    constexpr int kMaxIterations = 500;

    for (int it = 0; it < kMaxIterations; ++it) {
        // Normal equations J^T J and J^T r for the two parameters.
        double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double d = s.x[i];
            if (d <= 0.0) continue;  // f(0) = 1 regardless of (a, b); zero residual and Jacobian
            const double p = std::pow(d, 2.0 * b);
            const double denom = 1.0 + a * p;
            const double f = 1.0 / denom;
            const double r = f - s.y[i];
            const double da = -p / (denom * denom);
            const double db = -a * p * 2.0 * std::log(d) / (denom * denom);
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        if (std::abs(ga) + std::abs(gb) < 1e-14) return {a, b};

        bool accepted = false;
        for (int tries = 0; tries < 60 && !accepted; ++tries) {
            const double m00 = jaa * (1.0 + lambda);
            const double m11 = jbb * (1.0 + lambda);
            const double det = m00 * m11 - jab * jab;
            if (det <= 0.0 || !std::isfinite(det)) {
                lambda *= 10.0;
                continue;
            }
            const double step_a = -(m11 * ga - jab * gb) / det;
            const double step_b = -(m00 * gb - jab * ga) / det;
            const double na = a + step_a;
            const double nb = b + step_b;
            const double ncost = (na > 0.0 && nb > 0.0) ? sum_squares(s, na, nb) : INFINITY;
            if (ncost < cost) {
                const double rel = std::abs(step_a) / (std::abs(a) + 1e-12) +
                                   std::abs(step_b) / (std::abs(b) + 1e-12);
                a = na;
                b = nb;
                const double improvement = cost - ncost;
                cost = ncost;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                if (rel < 1e-12 || improvement < 1e-15 * (1.0 + cost)) return {a, b};
            } else {
                lambda *= 10.0;
            }
        }
        // No downhill step at any damping: we are at the minimum.
        if (!accepted) return {a, b};
    }
    fail(ErrorKind::invalid_argument, "curve fit did not converge for min_dist = " +
                                          std::to_string(min_dist) +
                                          ", spread = " + std::to_string(spread));
}

double curve_fit_rmse(const CurveParams& params, double min_dist, double spread) {
    check_args(min_dist, spread);
    const Samples s = target_profile(min_dist, spread);
    return std::sqrt(sum_squares(s, params.a, params.b) / static_cast<double>(s.x.size()));
}

}  // namespace compass
