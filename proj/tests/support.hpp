#pragma once

// Independent oracles used by the tests. None of these call into the code
// paths they are checking.

#include <cmath>
#include <cstddef>
#include <vector>

#include "sphereperc/geometry.hpp"
#include "sphereperc/stereographic.hpp"

namespace testsupport {

struct CircleFit {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

// Algebraic least-squares circle fit (Kasa method): solve the linear system
// for (2cx, 2cy, r^2 - cx^2 - cy^2) in x^2 + y^2 = 2cx*x + 2cy*y + c.
inline CircleFit fit_circle(const std::vector<sphereperc::PlanePoint>& pts) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sz = 0, sxz = 0, syz = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        const double z = p.x * p.x + p.y * p.y;
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        syy += p.y * p.y;
        sxy += p.x * p.y;
        sz += z;
        sxz += p.x * z;
        syz += p.y * z;
    }
    // Normal equations for [a b c] with a = 2cx, b = 2cy.
    double m[3][4] = {{sxx, sxy, sx, sxz},
                      {sxy, syy, sy, syz},
                      {sx, sy, n, sz}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        }
        for (int k = 0; k < 4; ++k) std::swap(m[col][k], m[pivot][k]);
        for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            const double f = m[row][col] / m[col][col];
            for (int k = 0; k < 4; ++k) m[row][k] -= f * m[col][k];
        }
    }
    const double a = m[0][3] / m[0][0];
    const double b = m[1][3] / m[1][1];
    const double c = m[2][3] / m[2][2];
    CircleFit fit;
    fit.cx = 0.5 * a;
    fit.cy = 0.5 * b;
    fit.radius = std::sqrt(c + fit.cx * fit.cx + fit.cy * fit.cy);
    return fit;
}

// Brute-force component labels for the cap adjacency relation
// (angular distance <= 2*gamma): O(N^3) label propagation to a fixed point.
inline std::vector<std::size_t> brute_force_components(
    const std::vector<sphereperc::SpherePoint>& centers, double gamma) {
    const std::size_t n = centers.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            adj[i][j] = i == j ||
                        sphereperc::angular_distance(centers[i], centers[j]) <= 2.0 * gamma;
        }
    }
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (adj[i][j] && label[j] < label[i]) {
                    label[i] = label[j];
                    changed = true;
                }
            }
        }
    }
    return label;
}

// Brute-force percolation oracle: true iff some pair of caps (i, j), i == j
// allowed, shares a component while cap j's antipodal mirror overlaps cap i,
// i.e. the coverage union holds two antipodal points of the sphere.
inline bool brute_force_percolates(const std::vector<sphereperc::SpherePoint>& centers,
                                   double gamma) {
    const auto label = brute_force_components(centers, gamma);
    const std::size_t n = centers.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (label[i] != label[j]) continue;
            if (sphereperc::angular_distance(centers[i], centers[j].antipode()) <=
                2.0 * gamma) {
                return true;
            }
        }
    }
    return false;
}

// Solves ((1 + cos(gamma)) / 2)^N = 1/2 for real N by bisection.
inline double bisect_critical_n(double gamma) {
    const double base = 0.5 * (1.0 + std::cos(gamma));
    double lo = 1e-9, hi = 1e9;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (std::pow(base, mid) > 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace testsupport
