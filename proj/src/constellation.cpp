#include "sphereperc/constellation.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sphereperc {

namespace {

constexpr double kRe = kEarthRadiusKm;

// Completes the tuple once h and eta are fixed (Law of Cosines / Sines in the
// satellite-user-center triangle).
LinkGeometry from_nadir(double h, double eta) {
    const double r_s = kRe + h;
    const double eta_max = std::asin(kRe / r_s);
    if (!(eta > 0.0) || eta > eta_max) {
        throw DomainError("link_geometry: nadir angle outside (0, asin(r_e/r_s)]");
    }
    const double disc = kRe * kRe - r_s * r_s * std::sin(eta) * std::sin(eta);
    const double d_m = -std::sqrt(std::max(0.0, disc)) + r_s * std::cos(eta);
    const double gamma = std::asin(std::min(1.0, d_m / kRe * std::sin(eta)));
    const double epsilon = 0.5 * kPi - gamma - eta;
    return LinkGeometry{h, r_s, eta, epsilon, gamma, d_m};
}

}  // namespace

LinkGeometry link_geometry(double h, LinkParam known, double value) {
    if (!(h > 0.0)) {
        throw DomainError("link_geometry: altitude must be positive");
    }
    const double r_s = kRe + h;
    switch (known) {
        case LinkParam::nadir:
            return from_nadir(h, value);
        case LinkParam::elevation: {
            if (!(value >= 0.0) || !(value < 0.5 * kPi)) {
                throw DomainError("link_geometry: elevation angle outside [0, pi/2)");
            }
            const double eta = std::asin(kRe * std::cos(value) / r_s);
            return from_nadir(h, eta);
        }
        case LinkParam::slant_range: {
            const double d_max = std::sqrt(r_s * r_s - kRe * kRe);
            if (!(value >= h) || !(value <= d_max)) {
                throw DomainError("link_geometry: slant range outside [h, sqrt(r_s^2-r_e^2)]");
            }
            const double cos_gamma = (r_s * r_s + kRe * kRe - value * value) / (2.0 * kRe * r_s);
            const double gamma = std::acos(std::min(1.0, std::max(-1.0, cos_gamma)));
            const double eta = std::asin(std::min(1.0, kRe * std::sin(gamma) / value));
            const double epsilon = 0.5 * kPi - gamma - eta;
            return LinkGeometry{h, r_s, eta, epsilon, gamma, value};
        }
        case LinkParam::coverage: {
            const double gamma_max = std::acos(kRe / r_s);
            if (!(value > 0.0) || value > gamma_max) {
                throw DomainError("link_geometry: coverage angle outside (0, acos(r_e/r_s)]");
            }
            const double d_m =
                std::sqrt(r_s * r_s + kRe * kRe - 2.0 * kRe * r_s * std::cos(value));
            const double eta = std::asin(std::min(1.0, kRe * std::sin(value) / d_m));
            const double epsilon = 0.5 * kPi - value - eta;
            return LinkGeometry{h, r_s, eta, epsilon, value, d_m};
        }
    }
    throw DomainError("link_geometry: unknown parameter kind");
}

Constellation sample_constellation(std::size_t n, double gamma, std::uint64_t seed) {
    if (n < 1) {
        throw DomainError("sample_constellation: N must be at least 1");
    }
    if (!(gamma > 0.0) || !(gamma < 0.5 * kPi)) {
        throw DomainError("sample_constellation: gamma outside (0, pi/2)");
    }
    Constellation c;
    c.count = n;
    c.gamma = gamma;
    c.seed = seed;
    c.provenance = Provenance::random_bpp;
    c.centers.reserve(n);
    RandomStream stream(seed);
    for (std::size_t i = 0; i < n; ++i) {
        c.centers.push_back(sample_uniform_sphere(stream));
    }
    return c;
}

std::pair<Constellation, LayoutInfo> full_coverage_layout(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 0.5 * kPi)) {
        throw DomainError("full_coverage_layout: gamma outside (0, pi/2)");
    }
    const int m = static_cast<int>(std::ceil(kPi / gamma));
    const double span = std::acos(std::cos(gamma) / std::cos(0.5 * kPi / m));
    const int n = static_cast<int>(std::ceil(kPi / span)) + 1;
    const double zeta = std::acos(std::cos(0.5 * kPi / m) * std::cos(kPi / n));
    if (!(zeta < gamma)) {
        throw ConstructionError("full_coverage_layout: piece cap does not fit the coverage angle");
    }

    Constellation c;
    c.count = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
    c.gamma = gamma;
    c.seed = 0;
    c.provenance = Provenance::layout;
    c.centers.reserve(c.count);
    // Belt j is the band of half width pi/(2m) around the meridian great
    // circle at longitude j*pi/m; its n piece centers sit on that circle.
    for (int j = 0; j < m; ++j) {
        const double lon = j * kPi / m;
        const double cl = std::cos(lon);
        const double sl = std::sin(lon);
        for (int k = 0; k < n; ++k) {
            const double t = (2.0 * k + 1.0) * kPi / n;  // angle along the belt circle
            const double st = std::sin(t);
            c.centers.push_back(SpherePoint(Vec3{st * cl, st * sl, -std::cos(t)}));
        }
    }
    return {std::move(c), LayoutInfo{m, n, zeta}};
}

void save_constellation(const Constellation& c, std::ostream& out) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu %.17g %llu %s\n", c.count, c.gamma,
                  static_cast<unsigned long long>(c.seed),
                  c.provenance == Provenance::layout ? "layout" : "random_bpp");
    out << buf;
    for (const auto& p : c.centers) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.dir().x, p.dir().y, p.dir().z);
        out << buf;
    }
}

Constellation load_constellation(std::istream& in) {
    Constellation c;
    std::string provenance;
    if (!(in >> c.count >> c.gamma >> c.seed >> provenance)) {
        throw DomainError("load_constellation: malformed header");
    }
    c.provenance = provenance == "layout" ? Provenance::layout : Provenance::random_bpp;
    c.centers.reserve(c.count);
    for (std::size_t i = 0; i < c.count; ++i) {
        Vec3 v;
        if (!(in >> v.x >> v.y >> v.z)) {
            throw DomainError("load_constellation: truncated center list");
        }
        c.centers.push_back(SpherePoint(v));
    }
    return c;
}

}  // namespace sphereperc
