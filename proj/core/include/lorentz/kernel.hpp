#pragma once

// Closed-form limit objects: the limit transfer map, the transition density
// P(S,h|h'), its S-marginal Pi(h|h'), the configuration measures mu, lambda, nu
// and their samplers.

#include "lorentz/arithmetic.hpp"
#include "lorentz/random.hpp"

namespace lorentz::kernel {

using arithmetic::ObstacleConfig;

struct Transfer {
    double S{0.0};
    double h{0.0};
};

Transfer limit_transfer(const ObstacleConfig& cfg, double h_prime);

/// Representative (a, b) with |b| <= a of the symmetry class of (h, h').
struct Canonical {
    double a;
    double b;
};
Canonical canonical(double h, double h_prime);

double p_simple(double S, double h, double h_prime);
double p_full(double S, double h, double h_prime);
double pi_kernel(double h, double h_prime);

/// int_{S0}^inf P(S,h|h') dS, exact antiderivative of the piecewise formula.
double p_tail(double S0, double h, double h_prime);
/// int_{S0}^inf (S - S0) P(S,h|h') dS, the next antiderivative.
double p_tail2(double S0, double h, double h_prime);

/// int_{h0}^{h1} int_{S0}^{S1} P(S,h|h') dS dh (S1 may be +inf).
double p_bin_mass(double S0, double S1, double h0, double h1, double h_prime, double tol = 1e-12);

/// S-breakpoints 2/(1+a) and 2/(1+b) of P(., h|h').
struct Breaks {
    double S1;
    double S2;
};
Breaks s_breaks(double h, double h_prime);

/// int_0^inf P dS by adaptive Gauss-Kronrod on the smooth pieces (no closed form used).
double integrate_p_over_s(double h, double h_prime, double tol = 1e-14);

// Measures on the configuration space.
double density_mu(double A, double B, double Q, int sigma);
double density_nu(double A, double B, double Q);
double density_lambda(double Q, double Qp, double D);

/// Rejection sampling in (A, B', Q); proposals counts the uniform triples drawn.
ObstacleConfig sample_mu(Rng& rng, long* proposals = nullptr);
Transfer sample_P(double h_prime, Rng& rng);

struct QQD {
    double Q;
    double Qp;
    double D;
};
QQD sample_lambda(Rng& rng, long* proposals = nullptr);

struct ABQ {
    double A;
    double B;  // b before reduction, B after
    double Q;
};
/// (Q, Q', D) -> (A, b, Q) = (1-D, (Q-1+Q'D)/Q, Q)
ABQ phi_map(const QQD& x);
/// b -> B = b - floor(b/(1-A)) (1-A)
ABQ psi_map(const ABQ& x);

struct CountM {
    int count;
    bool degenerate;  // some lattice translate within 1e-13 of an interval endpoint
};
int count_M(double A, double B, double Q);
CountM brute_count_M(double A, double B, double Q);

}  // namespace lorentz::kernel
