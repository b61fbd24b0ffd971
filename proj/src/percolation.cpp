#include "sphereperc/percolation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "sphereperc/analytics.hpp"

namespace sphereperc {

namespace {

// Incrementally grown cap-connectivity graph. Percolation is the event that
// one connected component of the coverage contains a pair of antipodal
// points: caps i, j must share a component while d(x_i, -x_j) <= 2*gamma.
// Such candidate pairs are sparse, so they are collected during growth and
// resolved against the union-find on demand.
class GrowingGraph {
public:
    GrowingGraph(std::size_t capacity, double gamma)
        : two_gamma_(2.0 * gamma), cos_2g_(std::cos(2.0 * gamma)), dsu_(capacity) {
        pts_.reserve(capacity);
    }

    void add(const Vec3& p) {
        const std::size_t i = pts_.size();
        pts_.push_back(p);
        for (std::size_t j = 0; j < i; ++j) {
            if (within_angle(pts_[j], p, two_gamma_, cos_2g_)) dsu_.unite(i, j);
        }
        // j == i covers the self-pair: a single cap holds antipodal points
        // exactly when gamma >= pi/2.
        const Vec3 anti = -p;
        for (std::size_t j = 0; j <= i; ++j) {
            if (within_angle(pts_[j], anti, two_gamma_, cos_2g_)) {
                candidates_.emplace_back(j, i);
            }
        }
    }

    bool percolated() {
        for (const auto& [a, b] : candidates_) {
            if (dsu_.find(a) == dsu_.find(b)) return true;
        }
        return false;
    }

private:
    double two_gamma_, cos_2g_;
    DisjointSet dsu_;
    std::vector<Vec3> pts_;
    std::vector<std::pair<std::size_t, std::size_t>> candidates_;
};

// Monte Carlo trials estimate the face-percolation criterion: probe sites
// spaced at the cap diameter 2*gamma are open when covered, and a trial
// succeeds when open sites connect the two polar regions. At cap-diameter
// spacing the coverage indicators of neighboring sites are independent, so
// the phase transition of this estimator tracks p_cov = 1/2, which is the
// closed-form critical satellite count.
struct SiteGrid {
    std::vector<Vec3> sites;
    std::vector<std::uint32_t> nbr_begin;  // CSR offsets, size sites + 1
    std::vector<std::uint32_t> nbr;
    std::vector<std::uint32_t> south;  // terminal sites within delta of a pole
    std::vector<std::uint32_t> north;
};

// Fibonacci lattice with nominal spacing delta = 2*gamma; neighbors within
// 1.5 * delta. Deterministic in gamma alone.
SiteGrid make_site_grid(double gamma) {
    const double delta = 2.0 * gamma;
    constexpr double kHexDensity = 0.8660254037844386;  // sqrt(3)/2
    const std::size_t m = static_cast<std::size_t>(
        std::ceil(4.0 * kPi / (kHexDensity * delta * delta)));
    SiteGrid g;
    g.sites.reserve(m);
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < m; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(m);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(i);
        g.sites.push_back(Vec3{r * std::cos(phi), r * std::sin(phi), z});
    }
    const double adjacency = 1.5 * delta;
    const double cos_adj = std::cos(std::min(adjacency, kPi));
    std::vector<std::vector<std::uint32_t>> nbr(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        for (std::uint32_t j = 0; j < i; ++j) {
            if (within_angle(g.sites[i], g.sites[j], adjacency, cos_adj)) {
                nbr[i].push_back(j);
                nbr[j].push_back(i);
            }
        }
    }
    g.nbr_begin.resize(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) g.nbr_begin[i + 1] = g.nbr_begin[i] + nbr[i].size();
    g.nbr.reserve(g.nbr_begin[m]);
    for (const auto& row : nbr) g.nbr.insert(g.nbr.end(), row.begin(), row.end());
    const double cos_delta = std::cos(std::min(delta, kPi));
    for (std::uint32_t i = 0; i < m; ++i) {
        if (g.sites[i].z <= -cos_delta) g.south.push_back(i);
        if (g.sites[i].z >= cos_delta) g.north.push_back(i);
    }
    return g;
}

// One trial's open-site state, grown cap by cap; opening is monotone, so
// coupled prefixes inherit pathwise monotonicity.
class FaceTrial {
public:
    FaceTrial(const SiteGrid& grid, double gamma)
        : grid_(grid), gamma_(gamma), cos_g_(std::cos(gamma)), open_(grid.sites.size(), 0) {}

    void add(const Vec3& cap) {
        for (std::size_t i = 0; i < open_.size(); ++i) {
            if (!open_[i] && within_angle(grid_.sites[i], cap, gamma_, cos_g_)) {
                open_[i] = 1;
            }
        }
    }

    bool percolated() const {
        std::vector<std::uint8_t> seen(open_.size(), 0);
        std::vector<std::uint32_t> stack;
        for (const auto i : grid_.south) {
            if (open_[i]) {
                seen[i] = 1;
                stack.push_back(i);
            }
        }
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (std::uint32_t k = grid_.nbr_begin[v]; k < grid_.nbr_begin[v + 1]; ++k) {
                const std::uint32_t w = grid_.nbr[k];
                if (open_[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        for (const auto i : grid_.north) {
            if (seen[i]) return true;
        }
        return false;
    }

private:
    const SiteGrid& grid_;
    double gamma_, cos_g_;
    std::vector<std::uint8_t> open_;
};

std::uint64_t trial_index(std::size_t t, std::size_t n_sat, double gamma, bool coupled) {
    if (coupled) return t;
    return t ^ mix64(0xa5a5a5a5ULL + n_sat) ^ mix64(std::bit_cast<std::uint64_t>(gamma));
}

// Runs f(t) for every trial index with the configured worker count. Each
// trial owns its state and writes its own output slot, so scheduling never
// affects results.
template <typename F>
void parallel_trials(std::size_t trials, F&& f) {
    const unsigned workers = std::min<std::size_t>(worker_count(), trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) f(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        constexpr std::size_t kChunk = 8;
        std::size_t start;
        while ((start = next.fetch_add(kChunk)) < trials) {
            const std::size_t end = std::min(trials, start + kChunk);
            for (std::size_t t = start; t < end; ++t) f(t);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

double log_binom_pmf(std::size_t k, std::size_t n, double p) {
    if (p <= 0.0) return k == 0 ? 0.0 : -HUGE_VAL;
    if (p >= 1.0) return k == n ? 0.0 : -HUGE_VAL;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
           k * std::log(p) + (n - k) * std::log1p(-p);
}

double binom_cdf(std::size_t k, std::size_t n, double p) {
    double sum = 0.0;
    for (std::size_t i = 0; i <= k; ++i) sum += std::exp(log_binom_pmf(i, n, p));
    return std::min(1.0, sum);
}

}  // namespace

bool ConnectivityGraph::pole_to_pole() const {
    for (const auto& comp : components) {
        if (comp.covers_south && comp.covers_north) return true;
    }
    return false;
}

ConnectivityGraph build_graph(const Constellation& c, const SpherePoint& south,
                              const SpherePoint& north) {
    const std::size_t n = c.count;
    const double cos_g = std::cos(c.gamma);
    const double cos_2g = std::cos(2.0 * c.gamma);

    ConnectivityGraph g;
    g.count = n;
    g.covers_south.resize(n);
    g.covers_north.resize(n);
    g.component.resize(n);

    DisjointSet dsu(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.covers_south[i] = within_angle(c.centers[i].dir(), south.dir(), c.gamma, cos_g);
        g.covers_north[i] = within_angle(c.centers[i].dir(), north.dir(), c.gamma, cos_g);
        for (std::size_t j = 0; j < i; ++j) {
            if (within_angle(c.centers[i].dir(), c.centers[j].dir(), 2.0 * c.gamma, cos_2g)) {
                dsu.unite(i, j);
            }
        }
    }

    std::vector<std::size_t> root_slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = dsu.find(i);
        g.component[i] = r;
        if (root_slot[r] == n) {
            root_slot[r] = g.components.size();
            g.components.push_back(ComponentSummary{r, 0, false, false});
        }
        auto& comp = g.components[root_slot[r]];
        comp.size += 1;
        comp.covers_south = comp.covers_south || g.covers_south[i];
        comp.covers_north = comp.covers_north || g.covers_north[i];
    }
    return g;
}

ConnectivityGraph build_graph(const Constellation& c) {
    return build_graph(c, SpherePoint::south(), SpherePoint::north());
}

bool percolates(const Constellation& c) {
    GrowingGraph g(c.count, c.gamma);
    for (const auto& p : c.centers) g.add(p.dir());
    return g.percolated();
}

std::vector<std::uint8_t> percolation_trials(std::size_t n_sat, double gamma,
                                             std::size_t trials, std::uint64_t seed,
                                             bool coupled) {
    const SiteGrid grid = make_site_grid(gamma);
    std::vector<std::uint8_t> outcomes(trials, 0);
    parallel_trials(trials, [&](std::size_t t) {
        RandomStream stream =
            RandomStream::substream(seed, trial_index(t, n_sat, gamma, coupled));
        FaceTrial trial(grid, gamma);
        for (std::size_t i = 0; i < n_sat; ++i) {
            trial.add(sample_uniform_sphere(stream).dir());
        }
        outcomes[t] = trial.percolated();
    });
    return outcomes;
}

std::vector<std::vector<std::uint8_t>> coupled_prefix_outcomes(
    const std::vector<std::size_t>& grid, double gamma, std::size_t trials,
    std::uint64_t seed) {
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw DomainError("coupled_prefix_outcomes: grid must be nonempty and increasing");
    }
    const std::size_t n_max = grid.back();
    const SiteGrid sites = make_site_grid(gamma);
    std::vector<std::vector<std::uint8_t>> outcomes(trials,
                                                    std::vector<std::uint8_t>(grid.size(), 0));
    parallel_trials(trials, [&](std::size_t t) {
        RandomStream stream = RandomStream::substream(seed, t);
        FaceTrial trial(sites, gamma);
        std::size_t gi = 0;
        for (std::size_t i = 0; i < n_max; ++i) {
            trial.add(sample_uniform_sphere(stream).dir());
            while (gi < grid.size() && grid[gi] == i + 1) {
                outcomes[t][gi] = trial.percolated();
                ++gi;
            }
        }
    });
    return outcomes;
}

std::pair<double, double> clopper_pearson95(std::size_t successes, std::size_t trials) {
    if (trials == 0 || successes > trials) {
        throw DomainError("clopper_pearson95: invalid counts");
    }
    constexpr double kAlphaHalf = 0.025;
    // Bisection on a tail probability that increases in p.
    auto solve = [&](auto tail, double target) {
        double lo = 0.0, hi = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (tail(mid) > target ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    double lower = 0.0, upper = 1.0;
    if (successes > 0) {
        // Largest p with P(X >= s | p) <= alpha/2: P(X >= s) increases in p.
        lower = solve([&](double p) { return 1.0 - binom_cdf(successes - 1, trials, p); },
                      kAlphaHalf);
    }
    if (successes < trials) {
        // P(X <= s | p) decreases in p.
        upper = solve([&](double p) { return -binom_cdf(successes, trials, p); }, -kAlphaHalf);
    }
    return {lower, upper};
}

PercolationEstimate estimate_theta(std::size_t n_sat, double gamma, std::size_t trials,
                                   std::uint64_t seed, bool coupled, IntervalKind interval) {
    if (trials < 1) {
        throw DomainError("estimate_theta: trials must be at least 1");
    }
    const auto outcomes = percolation_trials(n_sat, gamma, trials, seed, coupled);
    PercolationEstimate est;
    est.trials = trials;
    est.seed = seed;
    for (const auto o : outcomes) est.successes += o;
    est.theta_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
    est.degenerate = est.successes == 0 || est.successes == trials;
    if (interval == IntervalKind::wald) {
        est.ci95_halfwidth =
            est.degenerate
                ? 0.0
                : 1.96 * std::sqrt(est.theta_hat * (1.0 - est.theta_hat) / trials);
    } else {
        const auto [lo, hi] = clopper_pearson95(est.successes, trials);
        est.ci95_halfwidth = std::max(est.theta_hat - lo, hi - est.theta_hat);
    }
    return est;
}

namespace {

SweepResult sweep_link_axis(SweepAxis axis, const std::vector<double>& grid,
                            double fixed_value, std::size_t n_sat, std::size_t trials,
                            std::uint64_t seed, bool coupled, bool skip_infeasible) {
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) {
        throw DomainError("sweep: grid must be nonempty and increasing");
    }
    SweepResult result;
    result.axis = axis;
    result.seed = seed;
    for (const double v : grid) {
        double gamma;
        try {
            gamma = axis == SweepAxis::altitude
                        ? link_geometry(v, LinkParam::slant_range, fixed_value).gamma
                        : link_geometry(fixed_value, LinkParam::slant_range, v).gamma;
        } catch (const DomainError&) {
            if (skip_infeasible) continue;
            throw;
        }
        const auto est = estimate_theta(n_sat, gamma, trials, seed, coupled);
        result.rows.push_back(SweepRow{v, gamma, est.theta_hat, est.ci95_halfwidth, trials,
                                       p_cov(n_sat, gamma)});
    }
    return result;
}

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::satellites: return "N";
        case SweepAxis::altitude: return "altitude";
        case SweepAxis::slant_range: return "slant_range";
    }
    return "?";
}

}  // namespace

SweepResult sweep_satellites(const std::vector<std::size_t>& grid, double gamma,
                             std::size_t trials, std::uint64_t seed, bool coupled) {
    SweepResult result;
    result.axis = SweepAxis::satellites;
    result.seed = seed;
    if (coupled) {
        const auto outcomes = coupled_prefix_outcomes(grid, gamma, trials, seed);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::size_t successes = 0;
            for (std::size_t t = 0; t < trials; ++t) successes += outcomes[t][g];
            const double theta = static_cast<double>(successes) / trials;
            const double ci = (successes == 0 || successes == trials)
                                  ? 0.0
                                  : 1.96 * std::sqrt(theta * (1.0 - theta) / trials);
            result.rows.push_back(SweepRow{static_cast<double>(grid[g]), gamma, theta, ci,
                                           trials, p_cov(grid[g], gamma)});
        }
    } else {
        if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) {
            throw DomainError("sweep: grid must be nonempty and increasing");
        }
        for (const std::size_t n : grid) {
            const auto est = estimate_theta(n, gamma, trials, seed, false);
            result.rows.push_back(SweepRow{static_cast<double>(n), gamma, est.theta_hat,
                                           est.ci95_halfwidth, trials, p_cov(n, gamma)});
        }
    }
    return result;
}

SweepResult sweep_altitude(const std::vector<double>& grid, double d_m, std::size_t n_sat,
                           std::size_t trials, std::uint64_t seed, bool coupled,
                           bool skip_infeasible) {
    return sweep_link_axis(SweepAxis::altitude, grid, d_m, n_sat, trials, seed, coupled,
                           skip_infeasible);
}

SweepResult sweep_slant_range(const std::vector<double>& grid, double h, std::size_t n_sat,
                              std::size_t trials, std::uint64_t seed, bool coupled,
                              bool skip_infeasible) {
    return sweep_link_axis(SweepAxis::slant_range, grid, h, n_sat, trials, seed, coupled,
                           skip_infeasible);
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "axis,value,gamma_rad,theta_hat,ci95,trials,p_cov_analytic,seed\n";
    char buf[256];
    for (const auto& row : result.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%zu,%.17g,%llu\n",
                      axis_name(result.axis), row.value, row.gamma, row.theta_hat, row.ci95,
                      row.trials, row.p_cov, static_cast<unsigned long long>(result.seed));
        out << buf;
    }
}

SweepResult read_sweep_csv(std::istream& in) {
    SweepResult result;
    std::string line;
    if (!std::getline(in, line) ||
        line != "axis,value,gamma_rad,theta_hat,ci95,trials,p_cov_analytic,seed") {
        throw DomainError("read_sweep_csv: bad header");
    }
    bool have_axis = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw DomainError("read_sweep_csv: bad row");
        if (!have_axis) {
            if (fields[0] == "N") result.axis = SweepAxis::satellites;
            else if (fields[0] == "altitude") result.axis = SweepAxis::altitude;
            else if (fields[0] == "slant_range") result.axis = SweepAxis::slant_range;
            else throw DomainError("read_sweep_csv: unknown axis");
            result.seed = std::stoull(fields[7]);
            have_axis = true;
        }
        result.rows.push_back(SweepRow{std::stod(fields[1]), std::stod(fields[2]),
                                       std::stod(fields[3]), std::stod(fields[4]),
                                       static_cast<std::size_t>(std::stoull(fields[5])),
                                       std::stod(fields[6])});
    }
    return result;
}

unsigned worker_count() {
    if (const char* env = std::getenv("SPHEREPERC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace sphereperc
