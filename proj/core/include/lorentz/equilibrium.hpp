#pragma once

// Equilibrium profile E(s,h) = int_{2s}^inf int P(tau,h|h') dh' dtau.
//
// The tau-integral is done in closed form (kernel::p_tail), the h'-integral by
// double-exponential quadrature split at the kinks of the integrand.

#include <utility>
#include <vector>

#include "lorentz/random.hpp"

namespace lorentz::kernel {

double equilibrium_E(double s, double h, double tol = 1e-12);

/// -dE/ds = int 2 P(2s,h|h') dh'.
double equilibrium_dE(double s, double h, double tol = 1e-12);

/// int E(s,h) dh by nested quadrature.
double equilibrium_h_integral(double s, double tol = 1e-11);

/// int E(s,h) dh from its convergent power series in 1/s; requires s >= 2.
double equilibrium_h_integral_series(double s);

/// int_s^inf int E dh ds from the same series; requires s >= 2.
double equilibrium_tail_mass(double s);

/// int_{s0}^{s1} int_{h0}^{h1} E dh ds (s1 may be +inf only if s0 >= 2 and the
/// h-range is [-1,1]).
double equilibrium_bin_mass(double s0, double s1, double h0, double h1, double tol = 1e-11);

/// int_0^inf int E dh ds.
double equilibrium_total_mass(double tol = 1e-11);

/// int_t^inf int E(s,h)^2 dh ds.
double equilibrium_l2_tail(double t);

/// int_t^inf (int E(s,h) dh)^2 ds for t >= 2.
double equilibrium_h_integral_sq_tail(double t);

struct TableSpec {
    double s_max = 200.0;
    double s_dense = 2.0;   // uniform spacing on [0, s_dense]
    int n_dense = 257;      // nodes on [0, s_dense]
    int n_log = 241;        // log-spaced nodes on (s_dense, s_max]
    int n_h = 257;          // uniform nodes on [-1, 1]
};

/// E sampled on a stretched (s, h) grid with bilinear interpolation.
class EquilibriumTable {
public:
    static EquilibriumTable build(const TableSpec& spec = {});

    /// Bilinear value; 0 beyond s_max, where int E dh ~ tail_constant / s^2.
    double operator()(double s, double h) const;

    const std::vector<double>& s_grid() const { return s_; }
    const std::vector<double>& h_grid() const { return h_; }
    double at(std::size_t i, std::size_t j) const { return v_[i * h_.size() + j]; }
    double tail_constant() const { return tail_constant_; }
    double s_max() const { return s_.back(); }

private:
    std::vector<double> s_, h_, v_;
    double tail_constant_{0.0};
};

/// Draws (s, h) with density E: s-intervals of the table by their exact masses,
/// then the bilinear table surface inside the interval; beyond s_max the exact
/// tail law in s with the h-profile of the last row.
class EquilibriumSampler {
public:
    explicit EquilibriumSampler(const EquilibriumTable& table);
    std::pair<double, double> operator()(Rng& rng) const;

private:
    const EquilibriumTable* table_;
    std::vector<double> cdf_;  // over table intervals, then the tail
    std::vector<double> row_mass_;
    double sample_h(double s, std::size_t i, double ws, Rng& rng) const;
};

}  // namespace lorentz::kernel
