#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sphereperc/geometry.hpp"
#include "sphereperc/random.hpp"

namespace sphereperc {

// One constellation shell's coupled link-budget parameters. All angles
// radians, all lengths km. Instances produced by link_geometry() satisfy the
// law-of-cosines closure and gamma + eta + epsilon = pi/2.
struct LinkGeometry {
    double h;        // altitude
    double r_s;      // orbit radius, r_e + h
    double eta;      // nadir angle
    double epsilon;  // minimum elevation angle
    double gamma;    // coverage angle
    double d_m;      // maximum slant range
};

enum class LinkParam { nadir, elevation, slant_range, coverage };

// Solves the full tuple from the altitude and any one of eta / epsilon /
// d_m / gamma. Throws DomainError when the known value leaves its range.
LinkGeometry link_geometry(double h, LinkParam known, double value);

enum class Provenance { random_bpp, layout };

// N coverage-cap centers on the unit sphere plus the coverage angle and the
// seed that produced them. Immutable after construction; regenerating with
// the same (seed, N) reproduces the centers bitwise.
struct Constellation {
    std::size_t count = 0;
    double gamma = 0.0;
    std::vector<SpherePoint> centers;
    std::uint64_t seed = 0;
    Provenance provenance = Provenance::random_bpp;
};

Constellation sample_constellation(std::size_t n, double gamma, std::uint64_t seed);

struct LayoutInfo {
    int m = 0;         // belts
    int n = 0;         // pieces per belt
    double zeta = 0.0; // cap half angle needed to contain one piece
};

// Deterministic full-coverage layout of m*n caps of half angle gamma: m
// great-circle belts through the poles, each split into n pieces, one cap per
// piece. Covers the whole sphere by construction.
std::pair<Constellation, LayoutInfo> full_coverage_layout(double gamma);

// Flat text record: one header line (N, gamma_rad, seed, provenance) then N
// unit-vector triples at 17 significant digits.
void save_constellation(const Constellation& c, std::ostream& out);
Constellation load_constellation(std::istream& in);

}  // namespace sphereperc
