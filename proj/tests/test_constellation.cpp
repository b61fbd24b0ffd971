#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sphereperc/constellation.hpp"

using namespace sphereperc;

namespace {

constexpr double kDeg = kPi / 180.0;

void check_closure(const LinkGeometry& g) {
    CHECK(g.r_s == doctest::Approx(kEarthRadiusKm + g.h).epsilon(1e-12));
    const double cos_gamma =
        (g.r_s * g.r_s + kEarthRadiusKm * kEarthRadiusKm - g.d_m * g.d_m) /
        (2.0 * kEarthRadiusKm * g.r_s);
    CHECK(std::abs(std::cos(g.gamma) - cos_gamma) <= 1e-9);
    CHECK(std::abs(g.gamma + g.eta + g.epsilon - 0.5 * kPi) <= 1e-9);
}

}  // namespace

TEST_CASE("link geometry reproduces published LEO shells") {
    struct Row {
        double h, eps_deg, gamma_deg, eta_deg, d_m;
    };
    // Starlink / OneWeb / Kuiper shells; rows are self-consistent to ~1%.
    const Row rows[] = {{550.0, 40.0, 5.20, 44.80, 809.5},
                        {1200.0, 55.0, 6.14, 28.86, 1411.9},
                        {610.0, 35.2, 6.58, 48.22, 978.5}};
    for (const auto& row : rows) {
        const auto g = link_geometry(row.h, LinkParam::elevation, row.eps_deg * kDeg);
        check_closure(g);
        CHECK(g.gamma == doctest::Approx(row.gamma_deg * kDeg).epsilon(0.01));
        CHECK(g.eta == doctest::Approx(row.eta_deg * kDeg).epsilon(0.01));
        CHECK(g.d_m == doctest::Approx(row.d_m).epsilon(0.01));
    }
}

TEST_CASE("link geometry round-trips from every known parameter") {
    const double h = 550.0;
    const auto base = link_geometry(h, LinkParam::elevation, 40.0 * kDeg);
    const auto from_eta = link_geometry(h, LinkParam::nadir, base.eta);
    const auto from_dm = link_geometry(h, LinkParam::slant_range, base.d_m);
    const auto from_gamma = link_geometry(h, LinkParam::coverage, base.gamma);
    CHECK(from_eta.epsilon == doctest::Approx(base.epsilon).epsilon(1e-9));
    CHECK(from_dm.eta == doctest::Approx(base.eta).epsilon(1e-9));
    CHECK(from_gamma.d_m == doctest::Approx(base.d_m).epsilon(1e-9));
    check_closure(from_eta);
    check_closure(from_dm);
    check_closure(from_gamma);
}

TEST_CASE("link geometry limits and domain") {
    // Nadir-pointing limit: gamma -> 0 forces d_m -> h and eta -> 0.
    const auto tiny = link_geometry(550.0, LinkParam::coverage, 1e-6);
    CHECK(tiny.d_m == doctest::Approx(550.0).epsilon(1e-6));
    CHECK(tiny.eta < 1e-3);

    const double r_s = kEarthRadiusKm + 550.0;
    const double eta_max = std::asin(kEarthRadiusKm / r_s);
    CHECK_NOTHROW(link_geometry(550.0, LinkParam::nadir, eta_max));
    CHECK_THROWS_AS(link_geometry(550.0, LinkParam::nadir, eta_max + 1e-6), DomainError);
    CHECK_THROWS_AS(link_geometry(550.0, LinkParam::slant_range, 100.0), DomainError);
    CHECK_THROWS_AS(link_geometry(550.0, LinkParam::coverage, 0.5), DomainError);
    CHECK_THROWS_AS(link_geometry(-1.0, LinkParam::nadir, 0.1), DomainError);

    // Discriminant vanishes only at the horizon-grazing nadir angle.
    const auto grazing = link_geometry(550.0, LinkParam::nadir, eta_max);
    const double disc =
        kEarthRadiusKm * kEarthRadiusKm -
        grazing.r_s * grazing.r_s * std::sin(grazing.eta) * std::sin(grazing.eta);
    CHECK(std::abs(disc) < 1e-3);
}

TEST_CASE("sampled constellations are deterministic") {
    const auto a = sample_constellation(500, 5.2 * kDeg, 7);
    const auto b = sample_constellation(500, 5.2 * kDeg, 7);
    REQUIRE(a.count == 500);
    for (std::size_t i = 0; i < a.count; ++i) {
        CHECK(a.centers[i].dir().x == b.centers[i].dir().x);
        CHECK(a.centers[i].dir().y == b.centers[i].dir().y);
        CHECK(a.centers[i].dir().z == b.centers[i].dir().z);
    }
    const auto c = sample_constellation(500, 5.2 * kDeg, 8);
    CHECK(a.centers[0].dir().x != c.centers[0].dir().x);

    CHECK_THROWS_AS(sample_constellation(0, 0.1, 1), DomainError);
    CHECK_THROWS_AS(sample_constellation(10, 0.5 * kPi, 1), DomainError);
}

TEST_CASE("nearest-neighbor distances follow the void probability") {
    // P(min angle from a fixed point to the other N-1 > t) = ((1+cos t)/2)^(N-1).
    const std::size_t n = 2000;
    const int reps = 200;
    const double target = 0.5;
    const double t = std::acos(2.0 * std::pow(target, 1.0 / (n - 1.0)) - 1.0);
    int exceed = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const auto c = sample_constellation(n, 0.1, 1000 + rep);
        double min_angle = kPi;
        for (std::size_t i = 1; i < n; ++i) {
            min_angle = std::min(min_angle, angular_distance(c.centers[0], c.centers[i]));
        }
        exceed += min_angle > t;
    }
    const double sigma = std::sqrt(target * (1.0 - target) / reps);
    CHECK(std::abs(static_cast<double>(exceed) / reps - target) < 3.0 * sigma);
}

TEST_CASE("full coverage layout structure") {
    const auto [c, info] = full_coverage_layout(5.2 * kDeg);
    CHECK(info.m == 35);
    CHECK(info.n == 41);
    CHECK(c.count == 1435);
    CHECK(info.zeta < 5.2 * kDeg);
    CHECK(info.zeta == doctest::Approx(5.086 * kDeg).epsilon(1e-3));
    CHECK(c.provenance == Provenance::layout);

    // Deterministic: no RNG involved.
    const auto [c2, info2] = full_coverage_layout(5.2 * kDeg);
    CHECK(c2.centers[100].dir().x == c.centers[100].dir().x);

    // Near-hemisphere caps: ceil(180 / 89) = 3 belts.
    const auto [wide, wide_info] = full_coverage_layout(89.0 * kDeg);
    CHECK(wide_info.m == 3);
    CHECK(wide_info.zeta < 89.0 * kDeg);
    CHECK(wide.count == static_cast<std::size_t>(wide_info.m) * wide_info.n);
}

TEST_CASE("layout covers the sphere (sampled audit)") {
    const double gamma = 5.2 * kDeg;
    const auto [c, info] = full_coverage_layout(gamma);
    RandomStream stream(31);
    const double cos_g = std::cos(gamma);
    for (int s = 0; s < 10000; ++s) {
        const Vec3 p = sample_uniform_sphere(stream).dir();
        bool covered = false;
        for (const auto& center : c.centers) {
            if (within_angle(center.dir(), p, gamma, cos_g)) {
                covered = true;
                break;
            }
        }
        CHECK(covered);
    }
}

TEST_CASE("constellation text record round-trips bitwise") {
    const auto c = sample_constellation(64, 6.14 * kDeg, 99);
    std::stringstream ss;
    save_constellation(c, ss);
    const auto back = load_constellation(ss);
    REQUIRE(back.count == c.count);
    CHECK(back.gamma == c.gamma);
    CHECK(back.seed == c.seed);
    CHECK(back.provenance == c.provenance);
    for (std::size_t i = 0; i < c.count; ++i) {
        CHECK(back.centers[i].dir().x == c.centers[i].dir().x);
        CHECK(back.centers[i].dir().y == c.centers[i].dir().y);
        CHECK(back.centers[i].dir().z == c.centers[i].dir().z);
    }

    std::stringstream bad("not a header");
    CHECK_THROWS_AS(load_constellation(bad), DomainError);
}
