#include "sphereperc/stereographic.hpp"

#include <cmath>

namespace sphereperc {

namespace {

constexpr double kPoleTol = 1e-12;  // rad

// Signed distance from the origin of the projected image of the point at
// signed colatitude-from-South t along a fixed meridian.
double signed_projection(double t) {
    return 2.0 * kEarthRadiusKm * std::tan(0.5 * t);
}

Vec3 any_orthogonal(const Vec3& c) {
    const Vec3 axis = std::abs(c.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    const Vec3 e = cross(c, axis);
    return e * (1.0 / norm(e));
}

}  // namespace

PlanePoint project(const SpherePoint& p) {
    if (angular_distance(p, SpherePoint::north()) < kPoleTol) {
        throw PoleProjectionError("project: point at the North Pole has no image");
    }
    const double f = 2.0 * kEarthRadiusKm / (1.0 - p.dir().z);
    return PlanePoint{f * p.dir().x, f * p.dir().y};
}

SpherePoint unproject(const PlanePoint& q) {
    const double re2 = kEarthRadiusKm * kEarthRadiusKm;
    const double rho2 = q.x * q.x + q.y * q.y;
    const double denom = 4.0 * re2 + rho2;
    const double x = 4.0 * re2 * q.x / denom;
    const double y = 4.0 * re2 * q.y / denom;
    const double z = 2.0 * kEarthRadiusKm * rho2 / denom;
    return from_projection_frame(Vec3{x, y, z});
}

double projected_circle_radius(double psi, double gamma0) {
    if (!(gamma0 > 0.0) || !(gamma0 < 0.5 * kPi)) {
        throw DomainError("projected_circle_radius: gamma0 outside (0, pi/2)");
    }
    if (!(std::abs(psi) < kPi - gamma0)) {
        throw DomainError("projected_circle_radius: cap reaches the North Pole");
    }
    return kEarthRadiusKm *
           std::abs(std::tan(0.5 * (psi + gamma0)) - std::tan(0.5 * (psi - gamma0)));
}

double max_central_angle_for_radius(double r) {
    if (!(r > 0.0)) {
        throw DomainError("max_central_angle_for_radius: radius must be positive");
    }
    return 2.0 * std::atan(r / (2.0 * kEarthRadiusKm));
}

ProjectedShape project_cap(const Cap& cap) {
    const double delta = angular_distance(cap.center, SpherePoint::north());

    if (std::abs(delta - cap.half_angle) <= kPoleTol) {
        // Boundary passes through the North Pole: image is a half-plane.
        const Vec3 c = cap.center.dir();
        const Vec3 e1 = any_orthogonal(c);
        const Vec3 e2 = cross(c, e1);
        const double cg = std::cos(cap.half_angle);
        const double sg = std::sin(cap.half_angle);

        // Two boundary points well away from the pole.
        PlanePoint a{}, b{};
        int found = 0;
        for (int k = 0; k < 8 && found < 2; ++k) {
            const double th = 2.0 * kPi * k / 8.0;
            const Vec3 bd = c * cg + (e1 * std::cos(th) + e2 * std::sin(th)) * sg;
            const SpherePoint sp{bd};
            if (angular_distance(sp, SpherePoint::north()) > 0.2) {
                (found == 0 ? a : b) = project(sp);
                ++found;
            }
        }
        ProjectedShape shape;
        shape.kind = ShapeKind::half_plane;
        shape.line_point = a;
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double dn = std::hypot(dx, dy);
        PlanePoint n{-dy / dn, dx / dn};
        // Orient the normal toward the image of the cap interior.
        const PlanePoint interior = project(cap.center);
        if ((interior.x - a.x) * n.x + (interior.y - a.y) * n.y < 0.0) {
            n.x = -n.x;
            n.y = -n.y;
        }
        shape.line_normal = n;
        return shape;
    }

    // Meridian-diameter endpoints of the boundary circle; their images span a
    // diameter of the projected circle.
    const double psi = angular_distance(SpherePoint::south(), cap.center);
    const double rxy = std::hypot(cap.center.dir().x, cap.center.dir().y);
    PlanePoint azimuth{1.0, 0.0};
    if (rxy > 1e-15) {
        azimuth = PlanePoint{cap.center.dir().x / rxy, cap.center.dir().y / rxy};
    }
    const double d_far = signed_projection(psi + cap.half_angle);
    const double d_near = signed_projection(psi - cap.half_angle);

    ProjectedShape shape;
    shape.kind = delta > cap.half_angle ? ShapeKind::disk : ShapeKind::disk_complement;
    const double mid = 0.5 * (d_far + d_near);
    shape.center = PlanePoint{azimuth.x * mid, azimuth.y * mid};
    shape.radius = 0.5 * std::abs(d_far - d_near);
    return shape;
}

bool shape_contains(const ProjectedShape& shape, const PlanePoint& p) {
    switch (shape.kind) {
        case ShapeKind::disk:
            return plane_distance(p, shape.center) <= shape.radius;
        case ShapeKind::disk_complement:
            return plane_distance(p, shape.center) >= shape.radius;
        case ShapeKind::half_plane:
            return (p.x - shape.line_point.x) * shape.line_normal.x +
                       (p.y - shape.line_point.y) * shape.line_normal.y >=
                   0.0;
    }
    return false;
}

}  // namespace sphereperc
