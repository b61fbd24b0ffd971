#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sphereperc/analytics.hpp"
#include "sphereperc/hexlattice.hpp"
#include "sphereperc/percolation.hpp"

namespace {

using namespace sphereperc;

constexpr double kDegToRad = kPi / 180.0;

constexpr int kExitConfig = 2;      // config / domain error
constexpr int kExitInfeasible = 3;  // sweep grid point geometrically infeasible

std::string g_config_path;  // listed in --help; the file itself is applied below

// Flat key=value config support. Keys mirror the long option names without
// the leading dashes; boolean flags take true/false. Arguments given on the
// command line win over file values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) return args;

    std::ifstream file(path);
    if (!file) throw DomainError("config: cannot open file " + path);
    std::string line;
    while (std::getline(file, line)) {
        const auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos) {
            throw DomainError("config: expected key=value, got \"" + line + "\"");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(start, eq - start));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw DomainError("config: empty key in \"" + line + "\"");

        const std::string flag = "--" + key;
        bool on_command_line = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) on_command_line = true;
        }
        if (on_command_line) continue;
        if (value == "true") {
            args.push_back(flag);
        } else if (value == "false") {
            continue;
        } else {
            args.push_back(flag + "=" + value);
        }
    }
    return args;
}

struct GammaOptions {
    std::optional<double> gamma_deg;
    std::optional<double> h;
    std::optional<double> elevation_deg;
    std::optional<double> nadir_deg;
    std::optional<double> d_m;
};

void add_gamma_options(CLI::App* cmd, GammaOptions& opts) {
    cmd->set_help_flag("--help", "Print help and exit");
    cmd->add_option("--gamma-deg", opts.gamma_deg, "Coverage angle (degrees)");
    cmd->add_option("--h", opts.h, "Constellation altitude (km)");
    cmd->add_option("--elevation-deg", opts.elevation_deg, "Minimum elevation angle (degrees)");
    cmd->add_option("--nadir-deg", opts.nadir_deg, "Nadir angle (degrees)");
    cmd->add_option("--dm-km", opts.d_m, "Maximum slant range (km)");
}

// Resolves the coverage angle from exactly one determining input: gamma
// directly, or the altitude plus one of elevation / nadir / slant range /
// gamma through the link-geometry relations.
std::pair<double, std::optional<LinkGeometry>> resolve_gamma(const GammaOptions& opts) {
    if (opts.h) {
        int known = 0;
        known += opts.elevation_deg.has_value();
        known += opts.nadir_deg.has_value();
        known += opts.d_m.has_value();
        known += opts.gamma_deg.has_value();
        if (known != 1) {
            throw DomainError(
                "with --h, give exactly one of --elevation-deg, --nadir-deg, --dm-km, "
                "--gamma-deg");
        }
        LinkGeometry link{};
        if (opts.elevation_deg) {
            link = link_geometry(*opts.h, LinkParam::elevation, *opts.elevation_deg * kDegToRad);
        } else if (opts.nadir_deg) {
            link = link_geometry(*opts.h, LinkParam::nadir, *opts.nadir_deg * kDegToRad);
        } else if (opts.d_m) {
            link = link_geometry(*opts.h, LinkParam::slant_range, *opts.d_m);
        } else {
            link = link_geometry(*opts.h, LinkParam::coverage, *opts.gamma_deg * kDegToRad);
        }
        return {link.gamma, link};
    }
    if (!opts.gamma_deg) {
        throw DomainError("gamma undetermined: give --gamma-deg or --h with a link parameter");
    }
    const double gamma = *opts.gamma_deg * kDegToRad;
    if (!(gamma > 0.0) || !(gamma < 0.5 * kPi)) {
        throw DomainError("gamma: outside (0, 90) degrees");
    }
    return {gamma, std::nullopt};
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw DomainError("cannot open output file: " + path);
    return file;
}

std::vector<double> make_grid(double from, double to, double step) {
    if (!(step > 0.0) || !(from <= to)) {
        throw DomainError("grid: need --from <= --to and --step > 0");
    }
    std::vector<double> grid;
    for (double v = from; v <= to + 1e-9 * step; v += step) grid.push_back(v);
    return grid;
}

int run_analyze(const GammaOptions& gopts, std::optional<std::size_t> n_sat,
                std::optional<double> hex_side, std::optional<double> dm_for_critical,
                const std::string& out_path) {
    auto [gamma, link] = resolve_gamma(gopts);

    CriticalReport report;
    report.gamma = gamma;
    report.link = link;
    report.bounds = bounds_NL_NU(gamma);
    report.n_critical = critical_N(gamma);
    if (n_sat) {
        report.n_sat = n_sat;
        report.p_cov_at_n = p_cov(*n_sat, gamma);
        report.t = t_factor(*n_sat);
        report.gamma_critical = critical_coverage_angle(*n_sat);
        const std::optional<double> dm = dm_for_critical ? dm_for_critical
                                         : link          ? std::optional<double>(link->d_m)
                                                         : std::nullopt;
        if (dm) report.h_critical = critical_altitude(*n_sat, *dm);
        if (gopts.h) report.d_m_critical = critical_slant_range(*n_sat, *gopts.h);
    }
    if (hex_side) {
        report.hex_side = hex_side;
        report.hex_bounds = hex_bounds_Nc(gamma, *hex_side);
    }

    std::ofstream file;
    open_output(file, out_path) << critical_report_json(report) << "\n";
    return 0;
}

int run_simulate(const GammaOptions& gopts, std::size_t n_sat, std::size_t trials,
                 std::uint64_t seed, bool coupled, bool exact_interval,
                 const std::string& out_path) {
    auto [gamma, link] = resolve_gamma(gopts);
    const auto est = estimate_theta(n_sat, gamma, trials, seed, coupled,
                                    exact_interval ? IntervalKind::clopper_pearson
                                                   : IntervalKind::wald);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"N\": %zu, \"gamma_rad\": %.17g, \"theta_hat\": %.17g, "
                  "\"ci95_halfwidth\": %.17g, \"trials\": %zu, \"successes\": %zu, "
                  "\"seed\": %llu, \"degenerate\": %s}\n",
                  n_sat, gamma, est.theta_hat, est.ci95_halfwidth, est.trials, est.successes,
                  static_cast<unsigned long long>(est.seed),
                  est.degenerate ? "true" : "false");
    std::ofstream file;
    open_output(file, out_path) << buf;
    return 0;
}

int run_sweep(const std::string& axis, double from, double to, double step,
              const GammaOptions& gopts, std::optional<std::size_t> n_sat,
              std::size_t trials, std::uint64_t seed, bool coupled, bool skip_infeasible,
              const std::string& out_path) {
    if (axis != "N" && axis != "altitude" && axis != "slant_range") {
        throw DomainError("unknown sweep axis: " + axis);
    }
    const std::vector<double> grid = make_grid(from, to, step);
    if (axis == "altitude" && (!gopts.d_m || !n_sat)) {
        throw DomainError("altitude sweep needs --dm-km and --N");
    }
    if (axis == "slant_range" && (!gopts.h || !n_sat)) {
        throw DomainError("slant_range sweep needs --h and --N");
    }
    double gamma_for_n_axis = 0.0;
    if (axis == "N") gamma_for_n_axis = resolve_gamma(gopts).first;

    SweepResult result;
    try {
        if (axis == "N") {
            std::vector<std::size_t> n_grid;
            for (const double v : grid) n_grid.push_back(static_cast<std::size_t>(v + 0.5));
            result = sweep_satellites(n_grid, gamma_for_n_axis, trials, seed, coupled);
        } else if (axis == "altitude") {
            result = sweep_altitude(grid, *gopts.d_m, *n_sat, trials, seed, coupled,
                                    skip_infeasible);
        } else {
            result = sweep_slant_range(grid, *gopts.h, *n_sat, trials, seed, coupled,
                                       skip_infeasible);
        }
    } catch (const DomainError& e) {
        // Infeasible grid points surface here when not skipped.
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    std::ofstream file;
    write_sweep_csv(result, open_output(file, out_path));
    return 0;
}

int run_layout(const GammaOptions& gopts, std::size_t audit_samples, std::uint64_t seed,
               const std::string& out_path) {
    auto [gamma, link] = resolve_gamma(gopts);
    auto [constellation, info] = full_coverage_layout(gamma);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "index,ux,uy,uz\n";
    char buf[160];
    for (std::size_t i = 0; i < constellation.count; ++i) {
        const auto& d = constellation.centers[i].dir();
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i, d.x, d.y, d.z);
        out << buf;
    }

    std::size_t uncovered = 0;
    if (audit_samples > 0) {
        const double cos_g = std::cos(gamma);
        RandomStream stream(seed);
        for (std::size_t s = 0; s < audit_samples; ++s) {
            const Vec3 p = sample_uniform_sphere(stream).dir();
            bool covered = false;
            for (const auto& c : constellation.centers) {
                if (within_angle(c.dir(), p, gamma, cos_g)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) ++uncovered;
        }
    }
    std::snprintf(buf, sizeof(buf),
                  "m=%d n=%d N=%zu zeta_deg=%.6f percolates=%s samples=%zu uncovered=%zu\n",
                  info.m, info.n, constellation.count, info.zeta * 180.0 / kPi,
                  percolates(constellation) ? "true" : "false", audit_samples, uncovered);
    std::cerr << buf;
    return uncovered == 0 ? 0 : 1;
}

int run_hexgrid(const GammaOptions& gopts, std::size_t n_sat, std::uint64_t seed,
                double side, double extent, bool uniform_angle, const std::string& out_path) {
    auto [gamma, link] = resolve_gamma(gopts);
    const auto constellation = sample_constellation(n_sat, gamma, seed);
    const auto cells = hex_lattice(side, extent);
    std::vector<HexLabel> labels;
    labels.reserve(cells.size());
    for (const auto& cell : cells) {
        labels.push_back(classify_hex(cell, constellation,
                                      uniform_angle ? CertificateAngle::uniform
                                                    : CertificateAngle::per_cell));
    }
    std::ofstream file;
    write_hexgrid_csv(cells, labels, open_output(file, out_path));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical coverage percolation simulator and analytics"};
    app.require_subcommand(1);

    GammaOptions gopts_analyze, gopts_sim, gopts_sweep, gopts_layout, gopts_hex;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Closed-form critical report");
    analyze->add_option("--config", g_config_path, "Flat key=value config file");
    add_gamma_options(analyze, gopts_analyze);
    std::optional<std::size_t> analyze_n;
    std::optional<double> analyze_hex_side, analyze_dm_crit;
    std::string analyze_out;
    analyze->add_option("--N", analyze_n, "Satellite count for p_cov and critical geometry");
    analyze->add_option("--hex-side-km", analyze_hex_side, "Hexagon side for tight bounds");
    analyze->add_option("--critical-dm-km", analyze_dm_crit,
                        "Slant range for the critical-altitude report");
    analyze->add_option("--out", analyze_out, "Output file (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Single Monte Carlo theta estimate");
    simulate->add_option("--config", g_config_path, "Flat key=value config file");
    add_gamma_options(simulate, gopts_sim);
    std::size_t sim_n = 0, sim_trials = 1000;
    std::uint64_t sim_seed = 0;
    bool sim_coupled = false, sim_exact = false;
    std::string sim_out;
    simulate->add_option("--N", sim_n, "Satellite count")->required();
    simulate->add_option("--trials", sim_trials, "Trial count");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_flag("--coupled", sim_coupled, "Couple point streams across N");
    simulate->add_flag("--exact-ci", sim_exact, "Clopper-Pearson interval");
    simulate->add_option("--out", sim_out, "Output file (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Theta curve along N, altitude or slant range");
    sweep->add_option("--config", g_config_path, "Flat key=value config file");
    add_gamma_options(sweep, gopts_sweep);
    std::string sweep_axis;
    double sweep_from = 0, sweep_to = 0, sweep_step = 0;
    std::optional<std::size_t> sweep_n;
    std::size_t sweep_trials = 400;
    std::uint64_t sweep_seed = 0;
    bool sweep_coupled = false, sweep_skip = false;
    std::string sweep_out;
    sweep->add_option("--axis", sweep_axis, "N | altitude | slant_range")->required();
    sweep->add_option("--from", sweep_from, "Grid start")->required();
    sweep->add_option("--to", sweep_to, "Grid end")->required();
    sweep->add_option("--step", sweep_step, "Grid step")->required();
    sweep->add_option("--N", sweep_n, "Satellite count (altitude / slant_range axes)");
    sweep->add_option("--trials", sweep_trials, "Trials per grid point");
    sweep->add_option("--seed", sweep_seed, "RNG seed");
    sweep->add_flag("--coupled", sweep_coupled, "Couple point streams along the grid");
    sweep->add_flag("--skip-infeasible", sweep_skip, "Drop infeasible grid points");
    sweep->add_option("--out", sweep_out, "Output CSV (default stdout)");

    // layout
    auto* layout = app.add_subcommand("layout", "Deterministic full-coverage layout");
    layout->add_option("--config", g_config_path, "Flat key=value config file");
    add_gamma_options(layout, gopts_layout);
    std::size_t layout_audit = 0;
    std::uint64_t layout_seed = 0;
    std::string layout_out;
    layout->add_option("--audit-samples", layout_audit, "Monte Carlo coverage audit size");
    layout->add_option("--seed", layout_seed, "Audit RNG seed");
    layout->add_option("--out", layout_out, "Output CSV (default stdout)");

    // hexgrid
    auto* hexgrid = app.add_subcommand("hexgrid", "Hexagon certification dump");
    hexgrid->add_option("--config", g_config_path, "Flat key=value config file");
    add_gamma_options(hexgrid, gopts_hex);
    std::size_t hex_n = 0;
    std::uint64_t hex_seed = 0;
    double hex_side = 10.0, hex_extent = 100.0;
    bool hex_uniform = false;
    std::string hex_out;
    hexgrid->add_option("--N", hex_n, "Satellite count")->required();
    hexgrid->add_option("--seed", hex_seed, "RNG seed");
    hexgrid->add_option("--side-km", hex_side, "Hexagon side (km)");
    hexgrid->add_option("--extent-km", hex_extent, "Lattice extent radius (km)");
    hexgrid->add_flag("--uniform-angle", hex_uniform, "Certify with the worst-case angle");
    hexgrid->add_option("--out", hex_out, "Output CSV (default stdout)");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::vector<const char*> cargv{argv[0]};
        for (const auto& a : args) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) {
            return run_analyze(gopts_analyze, analyze_n, analyze_hex_side, analyze_dm_crit,
                               analyze_out);
        }
        if (simulate->parsed()) {
            return run_simulate(gopts_sim, sim_n, sim_trials, sim_seed, sim_coupled,
                                sim_exact, sim_out);
        }
        if (sweep->parsed()) {
            return run_sweep(sweep_axis, sweep_from, sweep_to, sweep_step, gopts_sweep,
                             sweep_n, sweep_trials, sweep_seed, sweep_coupled, sweep_skip,
                             sweep_out);
        }
        if (layout->parsed()) {
            return run_layout(gopts_layout, layout_audit, layout_seed, layout_out);
        }
        if (hexgrid->parsed()) {
            return run_hexgrid(gopts_hex, hex_n, hex_seed, hex_side, hex_extent, hex_uniform,
                               hex_out);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
