#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "sphereperc/constellation.hpp"

namespace sphereperc {

// Probability that a fixed point on the sphere is covered by at least one of
// N caps of half angle gamma. Powers are taken in log space so large N does
// not underflow.
double p_cov(std::size_t n_sat, double gamma);
double p_ncov(std::size_t n_sat, double gamma);

struct SatelliteBounds {
    long n_lower = 0;   // largest N with provably zero percolation probability
    long n_upper = 0;   // m * n, smallest constructive full-coverage count
    int m = 0;
    int n = 0;
    double zeta = 0.0;  // required piece-cap half angle, < gamma
};

// Constructive sub/super-critical witnesses: N_L = floor(pi / (2 gamma)),
// N_U = m * n from the belt-and-piece full coverage construction.
SatelliteBounds bounds_NL_NU(double gamma);

// Real-valued critical satellite count ln 2 / (ln 2 - ln(1 + cos gamma));
// equivalently the unique N with p_cov(N, gamma) = 1/2.
double critical_N(double gamma);

// Tight hexagon-lattice bounds for a given hexagon side a (km). Requires
// 2 * arctan(a / 2 r_e) < gamma. first = lower bound, second = upper bound.
std::pair<double, double> hex_bounds_Nc(double gamma, double a);

// cos of the critical coverage angle at satellite count N.
double t_factor(std::size_t n_sat);
double critical_coverage_angle(std::size_t n_sat);

// Critical altitude for a fixed slant range, and critical slant range for a
// fixed altitude, at satellite count N. DomainError when no altitude exists
// for the given d_m.
double critical_altitude(std::size_t n_sat, double d_m);
double critical_slant_range(std::size_t n_sat, double h);

// Aggregated closed-form report for one (gamma, N, hex side) request.
struct CriticalReport {
    double gamma = 0.0;
    std::optional<LinkGeometry> link;          // present when gamma came from (h, ...)
    std::optional<std::size_t> n_sat;
    std::optional<double> p_cov_at_n;
    SatelliteBounds bounds;
    double n_critical = 0.0;
    std::optional<double> hex_side;            // a, km
    std::optional<std::pair<double, double>> hex_bounds;
    std::optional<double> t;                   // t(N)
    std::optional<double> gamma_critical;
    std::optional<double> h_critical;          // for a requested d_m
    std::optional<double> d_m_critical;        // for a requested h
};

// Flat JSON object; angles carried in paired _rad/_deg fields.
std::string critical_report_json(const CriticalReport& report);

}  // namespace sphereperc
