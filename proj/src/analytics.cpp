#include "sphereperc/analytics.hpp"

#include <cmath>

#include "json.hpp"

namespace sphereperc {

namespace {

constexpr double kRe = kEarthRadiusKm;
constexpr double kLn2 = 0.69314718055994530942;

double log_half_term(double gamma) {
    // ln((1 + cos gamma) / 2)
    return std::log1p(std::cos(gamma)) - kLn2;
}

double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace

double p_ncov(std::size_t n_sat, double gamma) {
    if (n_sat < 1 || !(gamma > 0.0) || !(gamma < kPi)) {
        throw DomainError("p_cov: need N >= 1 and gamma in (0, pi)");
    }
    return std::exp(static_cast<double>(n_sat) * log_half_term(gamma));
}

double p_cov(std::size_t n_sat, double gamma) {
    return 1.0 - p_ncov(n_sat, gamma);
}

SatelliteBounds bounds_NL_NU(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 0.5 * kPi)) {
        throw DomainError("bounds_NL_NU: gamma outside (0, pi/2)");
    }
    SatelliteBounds b;
    b.n_lower = static_cast<long>(std::floor(kPi / (2.0 * gamma)));
    b.m = static_cast<int>(std::ceil(kPi / gamma));
    const double span = std::acos(std::cos(gamma) / std::cos(0.5 * kPi / b.m));
    b.n = static_cast<int>(std::ceil(kPi / span)) + 1;
    b.zeta = std::acos(std::cos(0.5 * kPi / b.m) * std::cos(kPi / b.n));
    b.n_upper = static_cast<long>(b.m) * b.n;
    return b;
}

double critical_N(double gamma) {
    if (!(gamma > 0.0) || !(gamma < kPi)) {
        throw DomainError("critical_N: gamma outside (0, pi)");
    }
    return kLn2 / (kLn2 - std::log1p(std::cos(gamma)));
}

std::pair<double, double> hex_bounds_Nc(double gamma, double a) {
    if (!(a > 0.0)) {
        throw DomainError("hex_bounds_Nc: hexagon side must be positive");
    }
    const double gamma_m = 2.0 * std::atan(a / (2.0 * kRe));
    if (!(gamma_m < gamma)) {
        throw DomainError("hex_bounds_Nc: hexagon angle reaches the coverage angle");
    }
    const double lower = kLn2 / (kLn2 - std::log1p(std::cos(gamma + gamma_m)));
    const double upper = kLn2 / (kLn2 - std::log1p(std::cos(gamma - gamma_m)));
    return {lower, upper};
}

double t_factor(std::size_t n_sat) {
    if (n_sat < 1) {
        throw DomainError("t_factor: N must be at least 1");
    }
    return 2.0 * std::exp2(-1.0 / static_cast<double>(n_sat)) - 1.0;
}

double critical_coverage_angle(std::size_t n_sat) {
    return std::acos(t_factor(n_sat));
}

double critical_altitude(std::size_t n_sat, double d_m) {
    if (!(d_m > 0.0)) {
        throw DomainError("critical_altitude: slant range must be positive");
    }
    const double t = t_factor(n_sat);
    const double radicand = d_m * d_m - kRe * kRe + t * t * kRe * kRe;
    if (radicand < 0.0) {
        throw DomainError("critical_altitude: slant range too small for this N");
    }
    return std::sqrt(radicand) + t * kRe - kRe;
}

double critical_slant_range(std::size_t n_sat, double h) {
    if (!(h > 0.0)) {
        throw DomainError("critical_slant_range: altitude must be positive");
    }
    const double t = t_factor(n_sat);
    const double r_s = kRe + h;
    return std::sqrt(kRe * kRe + r_s * r_s - 2.0 * t * kRe * r_s);
}

std::string critical_report_json(const CriticalReport& report) {
    nlohmann::json j;
    j["gamma_rad"] = report.gamma;
    j["gamma_deg"] = rad_to_deg(report.gamma);
    if (report.link) {
        j["h_km"] = report.link->h;
        j["eta_rad"] = report.link->eta;
        j["eta_deg"] = rad_to_deg(report.link->eta);
        j["epsilon_rad"] = report.link->epsilon;
        j["epsilon_deg"] = rad_to_deg(report.link->epsilon);
        j["d_m_km"] = report.link->d_m;
        j["coverage_area_km2"] = cap_area(report.link->gamma);
    }
    if (report.n_sat) j["N"] = *report.n_sat;
    if (report.p_cov_at_n) j["p_cov"] = *report.p_cov_at_n;
    j["N_L"] = report.bounds.n_lower;
    j["N_U"] = report.bounds.n_upper;
    j["m"] = report.bounds.m;
    j["n"] = report.bounds.n;
    j["zeta_rad"] = report.bounds.zeta;
    j["zeta_deg"] = rad_to_deg(report.bounds.zeta);
    j["N_c"] = report.n_critical;
    if (report.hex_side) j["hex_side_km"] = *report.hex_side;
    if (report.hex_bounds) {
        j["N_c_L"] = report.hex_bounds->first;
        j["N_c_U"] = report.hex_bounds->second;
    }
    if (report.t) j["t"] = *report.t;
    if (report.gamma_critical) {
        j["gamma_c_rad"] = *report.gamma_critical;
        j["gamma_c_deg"] = rad_to_deg(*report.gamma_critical);
    }
    if (report.h_critical) j["h_c_km"] = *report.h_critical;
    if (report.d_m_critical) j["d_m_c_km"] = *report.d_m_critical;
    return j.dump(2);
}

}  // namespace sphereperc
