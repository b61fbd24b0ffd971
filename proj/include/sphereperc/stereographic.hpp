#pragma once

#include "sphereperc/geometry.hpp"

namespace sphereperc {

// Stereographic projection from the North Pole onto the plane tangent at the
// South Pole. Projection frame: South Pole at (0,0,0), sphere center at
// (0,0,r_e), North Pole at (0,0,2*r_e); the plane is z = 0.

struct PlanePoint {
    double x = 0.0;  // km
    double y = 0.0;  // km
};

inline double plane_distance(const PlanePoint& a, const PlanePoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Unit-vector frame <-> projection frame. The unit frame keeps the sphere
// center at the origin with the poles on +-z.
inline Vec3 to_projection_frame(const SpherePoint& p) {
    return Vec3{p.dir().x, p.dir().y, p.dir().z + 1.0} * kEarthRadiusKm;
}

inline SpherePoint from_projection_frame(const Vec3& q) {
    return SpherePoint(Vec3{q.x, q.y, q.z - kEarthRadiusKm});
}

// P' = F(P). Throws PoleProjectionError within 1e-12 rad of the North Pole.
PlanePoint project(const SpherePoint& p);

// P = F^{-1}(P'). Total on the plane; |q| -> inf approaches the North Pole.
SpherePoint unproject(const PlanePoint& q);

// Radius of the projected image of a cap with central angle gamma0 whose
// center sits at colatitude-from-South psi. Requires |psi| < pi - gamma0.
double projected_circle_radius(double psi, double gamma0);

// Largest central angle whose cap can be the preimage of a plane disk of
// radius r: 2*arctan(r / (2*r_e)).
double max_central_angle_for_radius(double r);

enum class ShapeKind { disk, half_plane, disk_complement };

// Image of a spherical cap on the plane. disk when the cap excludes the
// North Pole, half_plane when the boundary passes through it (within 1e-12
// rad), disk_complement when the cap contains it. The half-plane is the side
// of the boundary line away from the origin.
struct ProjectedShape {
    ShapeKind kind = ShapeKind::disk;
    PlanePoint center{};        // disk / disk_complement boundary circle
    double radius = 0.0;
    PlanePoint line_point{};    // half_plane boundary
    PlanePoint line_normal{};   // unit, points into the covered side
};

ProjectedShape project_cap(const Cap& cap);

// Closed membership test matching the cap's closed boundary.
bool shape_contains(const ProjectedShape& shape, const PlanePoint& p);

}  // namespace sphereperc
