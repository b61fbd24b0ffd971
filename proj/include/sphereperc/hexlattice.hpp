#pragma once

#include <iosfwd>
#include <vector>

#include "sphereperc/constellation.hpp"
#include "sphereperc/stereographic.hpp"

namespace sphereperc {

// Pointy-top hexagonal lattice on the projection plane. Axial coordinates;
// (0, 0) is the cell centered at the origin, neighbor centers are sqrt(3)*a
// apart.
struct HexCell {
    int q = 0;
    int r = 0;
    PlanePoint center{};
    double side = 0.0;  // a, km
};

// All cells whose hexagons can intersect the disk of radius extent_radius
// about the origin; extent_radius = a yields the 7 innermost cells.
std::vector<HexCell> hex_lattice(double a, double extent_radius);

// Largest central angle of the spherical preimage of a hexagon's
// circumscribed circle (radius a): 2 * arctan(a / 2 r_e).
double gamma_m(double a);

// Analytic lower bounds on P{cell open} and P{cell closed} for N caps of
// half angle gamma and hexagon side a. Requires gamma_m(a) < gamma.
struct HexProbabilityBounds {
    double open_lb = 0.0;
    double closed_lb = 0.0;
};
HexProbabilityBounds hex_probability_bounds(std::size_t n_sat, double gamma, double a);

enum class HexLabel { open_certified, closed_certified, undetermined };

// per_cell evaluates the circumscribed circle's true preimage cap at the
// cell's position; uniform substitutes the worst-case angle gamma_m(a),
// matching the probability bounds above exactly.
enum class CertificateAngle { per_cell, uniform };

// Sufficient-condition certificate via the circumscribed circle: open when
// some cap center is within gamma - gamma0 of the preimage cap's center,
// closed when every center is beyond gamma + gamma0, otherwise undetermined.
HexLabel classify_hex(const HexCell& cell, const Constellation& c,
                      CertificateAngle mode = CertificateAngle::per_cell);

// Preimage cap of the cell's circumscribed circle (exact, per-cell angle).
Cap circumscribed_preimage_cap(const HexCell& cell);

// CSV schema: q,r,center_x_km,center_y_km,label
void write_hexgrid_csv(const std::vector<HexCell>& cells,
                       const std::vector<HexLabel>& labels, std::ostream& out);

}  // namespace sphereperc
