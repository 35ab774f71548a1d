#pragma once

#include <random>

#include "rotirs/geometry.hpp"
#include "rotirs/types.hpp"

namespace testing {

using namespace rotirs;

inline double wavelength_24ghz() { return kSpeedOfLight / 2.4e9; }

/// Reference anchors with M antennas and N1, N2 elements at half-wavelength spacing.
inline ScenarioGeometry reference_geometry(int m, int n1, int n2) {
    const double lambda = wavelength_24ghz();
    return ScenarioGeometry({-7, -15, 0}, {0, 25, 5}, {5, -20, 10}, {15, 20, 0}, near_square_layout(m, lambda / 2),
                            near_square_layout(n1, lambda / 2), near_square_layout(n2, lambda / 2), lambda);
}

/// Same anchors projected onto z = 0.
inline ScenarioGeometry projected_geometry(int m, int n1, int n2) {
    const double lambda = wavelength_24ghz();
    return ScenarioGeometry({-7, -15, 0}, {0, 25, 0}, {5, -20, 0}, {15, 20, 0}, near_square_layout(m, lambda / 2),
                            near_square_layout(n1, lambda / 2), near_square_layout(n2, lambda / 2), lambda);
}

inline Orientation random_orientation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kHalfPi, kHalfPi);
    const double theta = u(rng);
    return {theta, u(rng)};
}

inline CMatrix random_cmatrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = n(rng);
            m(i, j) = cplx(re, n(rng));
        }
    return m;
}

inline CVector random_cvector(std::mt19937_64& rng, Eigen::Index n) { return random_cmatrix(rng, n, 1).col(0); }

}  // namespace testing
