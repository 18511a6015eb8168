#pragma once

#include <cmath>
#include <span>

namespace compass {

struct SmoothKnnCalibration {
    double rho = 0.0;    // distance to the nearest neighbor
    double sigma = 1.0;  // bandwidth
};

inline constexpr double kSigmaLowerBound = 1e-8;
inline constexpr double kSigmaUpperBound = 1e4;
inline constexpr int kCalibrationMaxIterations = 64;
inline constexpr double kCalibrationTolerance = 1e-5;

inline double smooth_knn_target(std::size_t k) { return std::log2(static_cast<double>(k)); }

/// Solves sum_i exp(-max(0, d_i - rho) / sigma) = target for sigma by linear
/// bisection on [1e-8, 1e4], stopping at the first midpoint whose residual is
/// within 1e-5 (at most 64 halvings). A row whose distances are all equal
/// returns sigma = 1. Throws if the row is unsorted or shorter than 2.
SmoothKnnCalibration calibrate_smooth_knn(std::span<const double> sorted_distances, double target);

/// sum_i exp(-max(0, d_i - rho) / sigma)
double smooth_knn_mass(std::span<const double> distances, double rho, double sigma) noexcept;

}  // namespace compass
