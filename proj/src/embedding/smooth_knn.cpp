#include "compass/embedding/smooth_knn.hpp"

#include <algorithm>
#include <cmath>

#include "compass/core/error.hpp"

namespace compass {

double smooth_knn_mass(std::span<const double> distances, double rho, double sigma) noexcept {
    double sum = 0.0;
    for (double d : distances) sum += std::exp(-std::max(0.0, d - rho) / sigma);
    return sum;
}

SmoothKnnCalibration calibrate_smooth_knn(std::span<const double> sorted_distances, double target) {
    require(sorted_distances.size() >= 2, ErrorKind::invalid_argument,
            "smooth-kNN calibration needs at least 2 distances");
    require(std::is_sorted(sorted_distances.begin(), sorted_distances.end()),
            ErrorKind::invalid_argument, "smooth-kNN calibration requires a sorted row");

    SmoothKnnCalibration out;
    out.rho = sorted_distances.front();
    if (sorted_distances.back() == sorted_distances.front()) {
        out.sigma = 1.0;
        return out;
    }

    double lo = kSigmaLowerBound;
    double hi = kSigmaUpperBound;
    double mid = 1.0;
    for (int it = 0; it < kCalibrationMaxIterations; ++it) {
        mid = 0.5 * (lo + hi);
        const double mass = smooth_knn_mass(sorted_distances, out.rho, mid);
        if (std::abs(mass - target) <= kCalibrationTolerance) break;
        // mass grows with sigma
        if (mass > target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.sigma = mid;
    return out;
}

}  // namespace compass
