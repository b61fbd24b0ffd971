#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sphereperc/constellation.hpp"

namespace sphereperc {

// Union-find with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    // Returns the surviving root.
    std::size_t unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

    std::size_t component_size(std::size_t i) { return size_[find(i)]; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

struct ComponentSummary {
    std::size_t root = 0;
    std::size_t size = 0;
    bool covers_south = false;
    bool covers_north = false;
};

// Connectivity of coverage caps: caps i, j are joined iff the central angle
// between their centers is <= 2*gamma (closed condition).
struct ConnectivityGraph {
    std::size_t count = 0;
    std::vector<std::size_t> component;       // root label per cap
    std::vector<std::uint8_t> covers_south;   // per cap
    std::vector<std::uint8_t> covers_north;
    std::vector<ComponentSummary> components;

    // True iff one component holds a cap covering each pole.
    bool pole_to_pole() const;
};

ConnectivityGraph build_graph(const Constellation& c);
// Pole flags evaluated against arbitrary antipodal reference points; used to
// check rotation invariance.
ConnectivityGraph build_graph(const Constellation& c, const SpherePoint& south,
                              const SpherePoint& north);

// Percolation event: some connected component of the coverage contains a
// pair of antipodal points of the sphere. Equivalently, caps i and j share a
// component while the antipode of x_j lies within 2*gamma of x_i (closed
// conditions throughout, so i == j qualifies exactly when gamma >= pi/2).
// Rotation invariant by construction.
bool percolates(const Constellation& c);

enum class IntervalKind { wald, clopper_pearson };

struct PercolationEstimate {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double theta_hat = 0.0;
    double ci95_halfwidth = 0.0;
    std::uint64_t seed = 0;
    bool degenerate = false;  // successes in {0, trials}; Wald halfwidth is 0
};

// Monte Carlo estimate of theta(N, gamma) over independent trials, using the
// face-percolation criterion: deterministic probe sites at cap-diameter
// spacing (2*gamma, where neighboring coverage indicators decorrelate) count
// as open when covered, and a trial succeeds when open sites connect the two
// polar regions. Its phase transition therefore tracks p_cov = 1/2, i.e. the
// closed-form critical satellite count. Trial t uses the substream derived
// from (seed, t) in coupled mode, or from (seed, t, N) otherwise, so coupled
// estimates at increasing N share their point streams and are pathwise
// nondecreasing.
PercolationEstimate estimate_theta(std::size_t n_sat, double gamma, std::size_t trials,
                                   std::uint64_t seed, bool coupled = false,
                                   IntervalKind interval = IntervalKind::wald);

// Per-trial outcomes behind estimate_theta, exposed for pathwise checks.
std::vector<std::uint8_t> percolation_trials(std::size_t n_sat, double gamma,
                                             std::size_t trials, std::uint64_t seed,
                                             bool coupled = false);

// outcome[t][g]: percolation of the first grid[g] points of trial t's stream.
// Nondecreasing along g for every t by construction.
std::vector<std::vector<std::uint8_t>> coupled_prefix_outcomes(
    const std::vector<std::size_t>& grid, double gamma, std::size_t trials,
    std::uint64_t seed);

// Exact Clopper-Pearson 95% interval for successes/trials.
std::pair<double, double> clopper_pearson95(std::size_t successes, std::size_t trials);

enum class SweepAxis { satellites, altitude, slant_range };

struct SweepRow {
    double value = 0.0;      // grid coordinate (N, h or d_m)
    double gamma = 0.0;      // resolved coverage angle
    double theta_hat = 0.0;
    double ci95 = 0.0;
    std::size_t trials = 0;
    double p_cov = 0.0;      // analytic single-point coverage probability
};

struct SweepResult {
    SweepAxis axis = SweepAxis::satellites;
    std::uint64_t seed = 0;
    std::vector<SweepRow> rows;
};

SweepResult sweep_satellites(const std::vector<std::size_t>& grid, double gamma,
                             std::size_t trials, std::uint64_t seed, bool coupled);
// Altitude grid at fixed slant range, or slant-range grid at fixed altitude;
// gamma resolved per point through link_geometry. Infeasible grid points
// throw DomainError unless skip_infeasible, which drops their rows.
SweepResult sweep_altitude(const std::vector<double>& grid, double d_m, std::size_t n_sat,
                           std::size_t trials, std::uint64_t seed, bool coupled,
                           bool skip_infeasible = false);
SweepResult sweep_slant_range(const std::vector<double>& grid, double h, std::size_t n_sat,
                              std::size_t trials, std::uint64_t seed, bool coupled,
                              bool skip_infeasible = false);

// CSV schema: axis,value,gamma_rad,theta_hat,ci95,trials,p_cov_analytic,seed
void write_sweep_csv(const SweepResult& result, std::ostream& out);
SweepResult read_sweep_csv(std::istream& in);

// Worker count for trial-level parallelism: SPHEREPERC_THREADS if set, else
// hardware concurrency. Affects speed only; results depend only on the seed.
unsigned worker_count();

}  // namespace sphereperc
