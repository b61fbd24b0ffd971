#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "sphereperc/percolation.hpp"
#include "support.hpp"

using namespace sphereperc;

namespace {

constexpr double kDeg = kPi / 180.0;

SpherePoint meridian_from_south(double psi) {
    return SpherePoint(Vec3{std::sin(psi), 0.0, -std::cos(psi)});
}

Constellation manual(std::vector<SpherePoint> centers, double gamma) {
    Constellation c;
    c.count = centers.size();
    c.gamma = gamma;
    c.centers = std::move(centers);
    return c;
}

// Rotation by angle about an arbitrary axis (Rodrigues formula).
Vec3 rotate(const Vec3& v, const Vec3& axis_unit, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return v * c + cross(axis_unit, v) * s + axis_unit * (dot(axis_unit, v) * (1.0 - c));
}

}  // namespace

TEST_CASE("tangent caps join, separated caps do not") {
    const auto a = meridian_from_south(0.3);
    const auto b = meridian_from_south(0.5);
    const double d = angular_distance(a, b);

    const auto joined = build_graph(manual({a, b}, 0.5 * d));
    CHECK(joined.components.size() == 1);
    CHECK(joined.components[0].size == 2);

    const auto split = build_graph(manual({a, b}, 0.5 * (d - 1e-9)));
    CHECK(split.components.size() == 2);
}

TEST_CASE("three-cap chain forms one component") {
    const double gamma = 5.2 * kDeg;
    const auto g = build_graph(manual({meridian_from_south(0.2),
                                       meridian_from_south(0.2 + 1.9 * gamma),
                                       meridian_from_south(0.2 + 3.8 * gamma)},
                                      gamma));
    CHECK(g.components.size() == 1);
    CHECK(g.components[0].size == 3);
}

TEST_CASE("components match brute-force transitive closure") {
    RandomStream pick(41);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(48 * pick.next_unit());
        const double gamma = 0.05 + 0.5 * pick.next_unit();
        const auto c = sample_constellation(n, gamma, 5000 + rep);
        const auto g = build_graph(c);
        const auto oracle = testsupport::brute_force_components(c.centers, gamma);

        // Same partition: label equality must agree pairwise.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                CHECK((g.component[i] == g.component[j]) == (oracle[i] == oracle[j]));
            }
        }
        CHECK(percolates(c) == testsupport::brute_force_percolates(c.centers, gamma));
    }
}

TEST_CASE("percolation needs a component spanning antipodal points") {
    const double gamma = 10.0 * kDeg;
    // A single small cap holds no antipodal pair, wherever it sits.
    CHECK(!percolates(manual({SpherePoint::south()}, gamma)));
    CHECK(!percolates(manual({meridian_from_south(0.7)}, gamma)));

    // A hemisphere cap's rim is a great circle, so it holds antipodal pairs.
    CHECK(percolates(manual({SpherePoint(Vec3{1.0, 0.0, 0.0})}, 0.5 * kPi)));

    // Two opposite caps hold antipodal points but are disconnected.
    const double g45 = 0.25 * kPi;
    CHECK(!percolates(manual({SpherePoint::south(), SpherePoint::north()}, g45)));

    // A tangent meridian chain from pole to pole connects them.
    std::vector<SpherePoint> span;
    for (int k = 0; k <= 2; ++k) span.push_back(meridian_from_south(2.0 * g45 * k));
    CHECK(percolates(manual(std::move(span), g45)));
}

TEST_CASE("meridian chain of tangent caps stops short of the north pole") {
    const double gamma = 5.2 * kDeg;
    const std::size_t n_l = static_cast<std::size_t>(kPi / (2.0 * gamma));  // 17
    // Spacing backed off by 1e-12 relative so reconstructed angles stay within
    // the tangency condition despite trig rounding.
    const double spacing = 2.0 * gamma * (1.0 - 1e-12);
    std::vector<SpherePoint> chain;
    for (std::size_t k = 0; k < n_l; ++k) {
        chain.push_back(meridian_from_south(spacing * k));
    }
    const auto c = manual(std::move(chain), gamma);
    const auto g = build_graph(c);
    CHECK(g.components.size() == 1);  // consecutive caps tangent at distance 2*gamma
    CHECK(g.covers_south[0]);
    // 17 caps span at most 16 * 2 * gamma = 166.4 degrees between end centers,
    // short of the pi - 2 * gamma needed to reach around the sphere.
    CHECK(!percolates(c));
}

TEST_CASE("full coverage layout percolates") {
    const auto [c, info] = full_coverage_layout(5.2 * kDeg);
    CHECK(percolates(c));
}

TEST_CASE("rotation invariance") {
    RandomStream pick(42);
    for (int rep = 0; rep < 50; ++rep) {
        const auto c = sample_constellation(40, 0.3, 6000 + rep);
        const Vec3 axis = sample_uniform_sphere(pick).dir();
        const double angle = 2.0 * kPi * pick.next_unit();

        std::vector<SpherePoint> rotated;
        for (const auto& p : c.centers) {
            rotated.emplace_back(rotate(p.dir(), axis, angle));
        }
        const auto rc = manual(std::move(rotated), c.gamma);
        CHECK(percolates(c) == percolates(rc));

        // Component structure follows the rotation too: pole flags evaluated
        // against the rotated reference points match the originals.
        const SpherePoint rs(rotate(SpherePoint::south().dir(), axis, angle));
        const SpherePoint rn(rotate(SpherePoint::north().dir(), axis, angle));
        const auto g = build_graph(c);
        const auto rg = build_graph(rc, rs, rn);
        CHECK(g.pole_to_pole() == rg.pole_to_pole());
        CHECK(g.components.size() == rg.components.size());
    }
}

TEST_CASE("coupled trials are pathwise monotone") {
    const std::vector<std::size_t> grid{20, 30, 40, 50, 60};
    const auto outcomes = coupled_prefix_outcomes(grid, 20.0 * kDeg, 200, 77);
    REQUIRE(outcomes.size() == 200);
    for (const auto& row : outcomes) {
        for (std::size_t g = 1; g < row.size(); ++g) {
            CHECK(row[g] >= row[g - 1]);
        }
    }

    // Columns agree with the coupled single-N estimator.
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto single = percolation_trials(grid[g], 20.0 * kDeg, 200, 77, true);
        for (std::size_t t = 0; t < 200; ++t) {
            CHECK(single[t] == outcomes[t][g]);
        }
    }

    CHECK_THROWS_AS(coupled_prefix_outcomes({}, 0.3, 10, 1), DomainError);
    CHECK_THROWS_AS(coupled_prefix_outcomes({5, 5}, 0.3, 10, 1), DomainError);
    CHECK_THROWS_AS(coupled_prefix_outcomes({7, 5}, 0.3, 10, 1), DomainError);
}

TEST_CASE("estimator statistics and self-consistency") {
    const auto est = estimate_theta(60, 20.0 * kDeg, 1000, 3);
    CHECK(est.trials == 1000);
    CHECK(est.theta_hat == doctest::Approx(est.successes / 1000.0).epsilon(1e-15));
    if (!est.degenerate) {
        CHECK(est.ci95_halfwidth ==
              doctest::Approx(1.96 * std::sqrt(est.theta_hat * (1.0 - est.theta_hat) / 1000.0))
                  .epsilon(1e-12));
    }

    const auto est2 = estimate_theta(60, 20.0 * kDeg, 1000, 4);
    const double sigma = std::sqrt(std::max(1e-6, est.theta_hat * (1.0 - est.theta_hat)) / 1000.0);
    CHECK(std::abs(est.theta_hat - est2.theta_hat) < 3.0 * std::sqrt(2.0) * sigma);

    CHECK_THROWS_AS(estimate_theta(10, 0.3, 0, 1), DomainError);
}

TEST_CASE("clopper-pearson interval endpoints") {
    // Degenerate cases have closed forms: (1-p)^n = alpha/2 and p^n = alpha/2.
    {
        const auto [lo, hi] = clopper_pearson95(0, 10);
        CHECK(lo == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(hi == doctest::Approx(1.0 - std::pow(0.025, 0.1)).epsilon(1e-6));
    }
    {
        const auto [lo, hi] = clopper_pearson95(10, 10);
        CHECK(lo == doctest::Approx(std::pow(0.025, 0.1)).epsilon(1e-6));
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        // Symmetry: interval for s mirrors the interval for n - s.
        const auto [lo, hi] = clopper_pearson95(3, 10);
        const auto [lo2, hi2] = clopper_pearson95(7, 10);
        CHECK(lo == doctest::Approx(1.0 - hi2).epsilon(1e-8));
        CHECK(hi == doctest::Approx(1.0 - lo2).epsilon(1e-8));
        CHECK(lo < 0.3);
        CHECK(hi > 0.3);
    }
    CHECK_THROWS_AS(clopper_pearson95(2, 0), DomainError);
    CHECK_THROWS_AS(clopper_pearson95(5, 4), DomainError);
}

TEST_CASE("results are independent of the worker count") {
    setenv("SPHEREPERC_THREADS", "3", 1);
    const auto three = percolation_trials(50, 15.0 * kDeg, 128, 9);
    CHECK(worker_count() == 3);
    setenv("SPHEREPERC_THREADS", "1", 1);
    const auto one = percolation_trials(50, 15.0 * kDeg, 128, 9);
    unsetenv("SPHEREPERC_THREADS");
    REQUIRE(three.size() == one.size());
    for (std::size_t t = 0; t < one.size(); ++t) {
        CHECK(three[t] == one[t]);
    }
}

TEST_CASE("sweep rows and CSV round trip") {
    const auto result = sweep_satellites({10, 20, 30}, 20.0 * kDeg, 50, 5, true);
    REQUIRE(result.rows.size() == 3);
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        CHECK(result.rows[i].theta_hat >= result.rows[i - 1].theta_hat);
    }

    std::stringstream ss;
    write_sweep_csv(result, ss);
    const auto back = read_sweep_csv(ss);
    REQUIRE(back.rows.size() == result.rows.size());
    CHECK(back.axis == result.axis);
    CHECK(back.seed == result.seed);
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].value == result.rows[i].value);
        CHECK(back.rows[i].gamma == result.rows[i].gamma);
        CHECK(back.rows[i].theta_hat == result.rows[i].theta_hat);
        CHECK(back.rows[i].p_cov == result.rows[i].p_cov);
    }

    std::stringstream bad("wrong,header\n");
    CHECK_THROWS_AS(read_sweep_csv(bad), DomainError);
}

TEST_CASE("link-axis sweeps resolve gamma per grid point") {
    // Altitudes above the slant range are infeasible.
    const std::vector<double> grid{400.0, 500.0, 700.0, 900.0};
    CHECK_THROWS_AS(sweep_altitude(grid, 650.0, 50, 10, 1, false, false), DomainError);

    const auto skipped = sweep_altitude(grid, 650.0, 50, 10, 1, false, true);
    CHECK(skipped.rows.size() == 2);  // 700 and 900 km dropped
    for (const auto& row : skipped.rows) {
        const auto g = link_geometry(row.value, LinkParam::slant_range, 650.0);
        CHECK(row.gamma == doctest::Approx(g.gamma).epsilon(1e-12));
    }

    const auto slant = sweep_slant_range({600.0, 700.0, 800.0}, 550.0, 30, 10, 1, false);
    REQUIRE(slant.rows.size() == 3);
    CHECK(slant.rows[0].gamma < slant.rows[2].gamma);
}
