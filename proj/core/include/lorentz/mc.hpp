#pragma once

// Monte Carlo and Cesaro-average checks linking the billiard, the arithmetic of
// the three-obstacle configurations and the limit kernel; the extended phase
// space Markov process.

#include <cstdint>
#include <string>
#include <vector>

#include "lorentz/arithmetic.hpp"
#include "lorentz/billiard.hpp"
#include "lorentz/equilibrium.hpp"
#include "lorentz/initial.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/random.hpp"
#include "lorentz/stats.hpp"

namespace lorentz::mc {

/// (S, h) bins on [0, S_max) x [-1, 1] plus one overflow cell (S >= S_max or no hit).
struct KernelBins {
    int nS{20};
    int nh{20};
    double S_max{4.0};
    std::size_t size() const { return static_cast<std::size_t>(nS * nh + 1); }
    std::size_t index(double S, double h) const;
};

/// Exact P-masses of the bins for a given h'.
std::vector<double> kernel_bin_masses(const KernelBins& bins, double h_prime);

struct CesaroOptions {
    double points_per_decade{2000.0};
    double r_max{0.25};
    KernelBins bins{};
    double mass_floor{1e-3};  // per-bin relative check only where the P-mass reaches this
};

struct CesaroEstimate {
    double h_prime{0.0};
    double eps{0.0};
    double r_min{0.0};
    double r_max{0.0};
    double normalization{0.0};  // ln(r_max / r_min)
    KernelBins bins;
    std::vector<double> weights;
    std::vector<double> expected;
    long samples{0};
    long excluded{0};
    double total{0.0};
    stats::Deviation deviation;
};

/// dr/r-average over r in [eps, r_max] of bin indicators of the billiard transfer map.
CesaroEstimate cesaro_kernel_estimate(double h_prime, const Direction& omega, double eps,
                                      const CesaroOptions& opt = {});

/// Same bins, averaged over uniformly random directions at one fixed radius.
CesaroEstimate direction_averaged_kernel_estimate(double h_prime, double r, long n_directions,
                                                  std::uint64_t seed, const KernelBins& bins = {},
                                                  double mass_floor = 1e-3);

/// Limit map at (omega, r): reduces omega to the first octant, as the billiard does.
kernel::Transfer limit_transfer_at(double h_prime, const Direction& omega, double r);
arithmetic::ObstacleConfig reduced_params(const Direction& omega, double r);

struct ConfigBins {
    int n{6};  // per axis on (A, B, Q), times two signs of sigma
    std::size_t size() const { return static_cast<std::size_t>(2 * n * n * n); }
    std::size_t index(double A, double B, double Q, int sigma) const;
};

/// mu-masses of the ConfigBins cells.
std::vector<double> mu_bin_masses(const ConfigBins& bins);

struct ConfigDistribution {
    double eps{0.0};
    ConfigBins bins;
    std::vector<double> weights;
    std::vector<double> expected;
    long samples{0};
    long excluded{0};
    double mean_sigma{0.0};
    double mean_sigma_A{0.0};  // dr/r-average of sigma * g for g = A, Q
    double mean_sigma_Q{0.0};
    stats::ChiSquare chi2;
    stats::Deviation deviation;
};

ConfigDistribution cesaro_config_distribution(const Direction& omega, double eps,
                                              double points_per_decade = 20000.0, double r_max = 0.25);

struct AsymptoticRow {
    double r{0.0};
    double S_billiard{0.0}, h_billiard{0.0};
    double S_limit{0.0}, h_limit{0.0};
    double err_S{0.0}, err_h{0.0};
    bool excluded{false};
    std::string reason;
};

struct AsymptoticCheck {
    std::vector<AsymptoticRow> rows;
    double slope{0.0};
    double max_err_h{0.0};
    int used{0};
};

AsymptoticCheck asymptotic_transfer_check(const Direction& omega, const std::vector<double>& r_list,
                                          double h_prime);

struct MarkovState {
    Vec2 x;             // in [0, 1)^2
    Direction omega;
    double s{0.0};      // time left until the next collision
    double h{0.0};      // impact parameter at that collision
    double t{0.0};
};

/// Moves to the next collision, turns omega by pi - 2 arcsin(h), and draws the
/// next (2s, h) from the limit map with a fresh configuration drawn from mu.
MarkovState markov_step(const MarkovState& state, Rng& rng);

struct SHBins {
    std::vector<double> s_edges;  // last edge may be +inf
    int nh{10};
    std::size_t size() const { return (s_edges.size() - 1) * static_cast<std::size_t>(nh); }
    static SHBins standard();
};

std::vector<double> equilibrium_bin_masses(const SHBins& bins);

struct StationaryTest {
    long steps{0};
    double t_obs{0.0};              // observation time of each replica (0 for a single chain)
    long samples{0};
    double mean_flight{0.0};        // mean s per step
    double mean_flight_stderr{0.0};
    std::vector<double> counts;
    std::vector<double> expected;
    stats::ChiSquare chi2;
};

/// Independent replicas started from E (x and omega uniform), each observed once at
/// time t_obs; about `steps` chain steps in total. Samples are independent, so the
/// chi-square test is valid despite the heavy flight-length tail.
StationaryTest markov_stationary_test(long steps, double t_obs, std::uint64_t seed,
                                      const kernel::EquilibriumTable& table,
                                      const SHBins& bins = SHBins::standard());

/// One long chain sampled at jittered times spaced about `spacing` apart. Long flights
/// put many correlated samples into the same cells, so the chi-square p-value of this
/// variant is only indicative.
StationaryTest markov_time_sampled_test(long steps, double spacing, std::uint64_t seed,
                                        const SHBins& bins = SHBins::standard());

/// Coarse (x1, x2, theta) histogram plus an (s, h) histogram per snapshot.
struct Snapshot {
    double t{0.0};
    int nx{8};
    int ntheta{8};
    std::vector<double> xw;  // nx * nx * ntheta, normalized to particle fraction
    std::vector<double> sh;  // SHBins::standard() layout (empty for billiard ensembles)
};

std::vector<Snapshot> markov_ensemble(const InitialData& f_in, long n_particles,
                                      const std::vector<double>& times, std::uint64_t seed,
                                      const kernel::EquilibriumTable& table, int nx = 8, int ntheta = 8);

/// Exact billiard at radius r = 1/K under Boltzmann-Grad scaling.
std::vector<Snapshot> billiard_ensemble(const InitialData& f_in, double r, long n_particles,
                                        const std::vector<double>& times, std::uint64_t seed, int nx = 8,
                                        int ntheta = 8);

struct HypothesisH {
    long pairs{0};
    double corr_A{0.0}, corr_B{0.0}, corr_Q{0.0};
    double mean_sigma_product{0.0};
    double mean_A{0.0}, mean_Q{0.0};
};

/// Lag-one correlations of (A, B, Q, sigma)(omega_j, r) along billiard trajectories.
HypothesisH hypothesis_h(double r, long n_trajectories, int n_collisions, std::uint64_t seed);

}  // namespace lorentz::mc
