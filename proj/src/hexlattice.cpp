#include "sphereperc/hexlattice.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sphereperc {

namespace {

constexpr double kRe = kEarthRadiusKm;
constexpr double kSqrt3 = 1.7320508075688772935;

PlanePoint axial_center(int q, int r, double a) {
    return PlanePoint{kSqrt3 * a * (q + 0.5 * r), 1.5 * a * r};
}

// Preimage cap of the plane disk (center at distance rho from the origin,
// radius `radius`): colatitudes of the radial diameter endpoints fix the
// cap's center and central angle.
void preimage_disk(double rho, double radius, double* psi0, double* gamma0) {
    const double t_near = 2.0 * std::atan((rho - radius) / (2.0 * kRe));
    const double t_far = 2.0 * std::atan((rho + radius) / (2.0 * kRe));
    *psi0 = 0.5 * (t_near + t_far);
    *gamma0 = 0.5 * (t_far - t_near);
}

SpherePoint cap_center_at(double psi, const PlanePoint& azimuth_of) {
    const double rho = std::hypot(azimuth_of.x, azimuth_of.y);
    double ax = 1.0, ay = 0.0;
    if (rho > 1e-15) {
        ax = azimuth_of.x / rho;
        ay = azimuth_of.y / rho;
    }
    return SpherePoint(Vec3{std::sin(psi) * ax, std::sin(psi) * ay, -std::cos(psi)});
}

}  // namespace

std::vector<HexCell> hex_lattice(double a, double extent_radius) {
    if (!(a > 0.0) || !(extent_radius >= a)) {
        throw DomainError("hex_lattice: need a > 0 and extent_radius >= a");
    }
    // A cell belongs to the window when its hexagon (circumradius a) can
    // touch the disk of radius extent_radius.
    const double reach = extent_radius + a;
    const int r_max = static_cast<int>(std::ceil(reach / (1.5 * a))) + 1;
    const int q_max = static_cast<int>(std::ceil(reach / (kSqrt3 * a))) + r_max;
    std::vector<HexCell> cells;
    for (int r = -r_max; r <= r_max; ++r) {
        for (int q = -q_max; q <= q_max; ++q) {
            const PlanePoint c = axial_center(q, r, a);
            if (std::hypot(c.x, c.y) <= reach) {
                cells.push_back(HexCell{q, r, c, a});
            }
        }
    }
    return cells;
}

double gamma_m(double a) {
    if (!(a > 0.0)) {
        throw DomainError("gamma_m: hexagon side must be positive");
    }
    return 2.0 * std::atan(a / (2.0 * kRe));
}

HexProbabilityBounds hex_probability_bounds(std::size_t n_sat, double gamma, double a) {
    const double gm = gamma_m(a);
    if (!(gm < gamma)) {
        throw DomainError("hex_probability_bounds: gamma_m >= gamma");
    }
    const double n = static_cast<double>(n_sat);
    HexProbabilityBounds b;
    b.open_lb = 1.0 - std::exp(n * (std::log1p(std::cos(gamma - gm)) - std::log(2.0)));
    b.closed_lb = std::exp(n * (std::log1p(std::cos(gamma + gm)) - std::log(2.0)));
    return b;
}

Cap circumscribed_preimage_cap(const HexCell& cell) {
    const double rho = std::hypot(cell.center.x, cell.center.y);
    double psi0, gamma0;
    preimage_disk(rho, cell.side, &psi0, &gamma0);
    if (!(psi0 + gamma0 < kPi)) {
        throw DomainError("circumscribed_preimage_cap: cell outside the disk regime");
    }
    return Cap(cap_center_at(psi0, cell.center), gamma0);
}

HexLabel classify_hex(const HexCell& cell, const Constellation& c, CertificateAngle mode) {
    const Cap preimage = circumscribed_preimage_cap(cell);
    const double gamma0 =
        mode == CertificateAngle::uniform ? gamma_m(cell.side) : preimage.half_angle;
    const Vec3 center = preimage.center.dir();

    bool any_open = false;
    bool all_far = true;
    const double open_angle = c.gamma - gamma0;
    const double closed_angle = c.gamma + gamma0;
    const double cos_open = std::cos(open_angle);
    const double cos_closed = std::cos(closed_angle);
    for (const auto& sat : c.centers) {
        if (open_angle > 0.0 && within_angle(center, sat.dir(), open_angle, cos_open)) {
            any_open = true;
            break;
        }
        if (within_angle(center, sat.dir(), closed_angle, cos_closed)) {
            all_far = false;
        }
    }
    if (any_open) return HexLabel::open_certified;
    if (all_far) return HexLabel::closed_certified;
    return HexLabel::undetermined;
}

void write_hexgrid_csv(const std::vector<HexCell>& cells,
                       const std::vector<HexLabel>& labels, std::ostream& out) {
    out << "q,r,center_x_km,center_y_km,label\n";
    char buf[192];
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const char* label = "undetermined";
        if (i < labels.size()) {
            if (labels[i] == HexLabel::open_certified) label = "open_certified";
            else if (labels[i] == HexLabel::closed_certified) label = "closed_certified";
        }
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%s\n", cells[i].q, cells[i].r,
                      cells[i].center.x, cells[i].center.y, label);
        out << buf;
    }
}

}  // namespace sphereperc
