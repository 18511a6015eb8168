#pragma once

#include <cmath>

namespace compass {

struct CurveParams {
    double a = 0.0;
    double b = 0.0;

    bool operator==(const CurveParams&) const = default;
};

// Low-dimensional similarity 1 / (1 + a d^(2b)).
inline double curve_value(const CurveParams& p, double d) noexcept {
    if (d <= 0.0) return 1.0;
    return 1.0 / (1.0 + p.a * std::pow(d, 2.0 * p.b));
}

inline constexpr int kCurveSamples = 300;

/// Least-squares fit of the curve to the target profile
/// 1 for d <= min_dist, exp(-(d - min_dist) / spread) beyond, sampled at 300
/// evenly spaced points on [0, 3 spread]. Levenberg-Marquardt from (1, 1).
CurveParams find_ab_params(double min_dist, double spread);

/// Root-mean-square error of `params` against the target profile.
double curve_fit_rmse(const CurveParams& params, double min_dist, double spread);

}  // namespace compass
