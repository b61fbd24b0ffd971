#pragma once

#include <cmath>

#include "sphereperc/errors.hpp"

namespace sphereperc {

// Earth radius in km. All lengths in this library are km, all angles radians.
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) {
    return std::sqrt(dot(a, a));
}

// Unit direction on the Earth sphere. Construction normalizes, so the
// invariant |dir| = 1 holds for every live instance.
class SpherePoint {
public:
    explicit SpherePoint(const Vec3& v) {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw DomainError("SpherePoint: zero or non-finite direction");
        }
        // Already-unit inputs pass through untouched so reconstruction from a
        // serialized direction is bitwise stable.
        dir_ = std::abs(n - 1.0) <= 1e-12 ? v : v * (1.0 / n);
    }

    static SpherePoint north() { return SpherePoint(Vec3{0.0, 0.0, 1.0}); }
    static SpherePoint south() { return SpherePoint(Vec3{0.0, 0.0, -1.0}); }

    const Vec3& dir() const { return dir_; }

    SpherePoint antipode() const { return SpherePoint(-dir_); }

private:
    Vec3 dir_;
};

// Central angle between two unit directions, in [0, pi]. atan2 of cross-norm
// and dot stays accurate near 0 and pi where acos cancels.
inline double angular_distance(const SpherePoint& u, const SpherePoint& v) {
    return std::atan2(norm(cross(u.dir(), v.dir())), dot(u.dir(), v.dir()));
}

// Area of a spherical cap with the given half angle, on the Earth sphere.
inline double cap_area(double half_angle) {
    if (!(half_angle > 0.0) || !(half_angle <= kPi)) {
        throw DomainError("cap_area: half_angle outside (0, pi]");
    }
    return 2.0 * kPi * kEarthRadiusKm * kEarthRadiusKm * (1.0 - std::cos(half_angle));
}

struct Cap {
    SpherePoint center;
    double half_angle;

    Cap(const SpherePoint& c, double ha) : center(c), half_angle(ha) {
        if (!(ha > 0.0) || !(ha < kPi)) {
            throw DomainError("Cap: half_angle outside (0, pi)");
        }
    }
};

// Closed-boundary membership: points exactly on the rim count as covered.
inline bool cap_contains(const Cap& cap, const SpherePoint& p) {
    return angular_distance(cap.center, p) <= cap.half_angle;
}

// Fast closed test for angular_distance(u, v) <= angle given cos(angle).
// The dot comparison decides all but a ~1e-9 band around the threshold,
// where it falls back to the exact atan2 route so boundary semantics match
// angular_distance() bit for bit.
inline bool within_angle(const Vec3& u, const Vec3& v, double angle, double cos_angle) {
    const double d = dot(u, v);
    constexpr double kGuard = 1e-9;
    if (d > cos_angle + kGuard) return true;
    if (d < cos_angle - kGuard) return false;
    return std::atan2(norm(cross(u, v)), d) <= angle;
}

}  // namespace sphereperc
