#pragma once

// Continued-fraction and Farey computation of the three-obstacle parameters.
//
// Directions are handled as exact ratios alpha = omega2 / omega1 of two doubles;
// the errors d_n = |q_n alpha - p_n| are evaluated from (p_n, q_n) with
// compensated products instead of the unstable three-term recurrence.

#include <cstdint>
#include <optional>
#include <vector>

#include "lorentz/geometry.hpp"

namespace lorentz::arithmetic {

struct CFExpansion {
    double num{0.0};  // alpha = num / den
    double den{1.0};
    double alpha{0.0};
    std::vector<std::int64_t> digits;  // a_1, a_2, ...
    std::vector<std::int64_t> p;       // p_0 = 1, p_1 = 0, ...
    std::vector<std::int64_t> q;       // q_0 = 0, q_1 = 1, ...
    std::vector<double> d;             // d_0 = 1, d_1 = alpha, ...
};

struct StopRule {
    int max_digits{0};  // stop after this many digits (0: unused)
    double eps{0.0};    // stop once d_n <= eps has been reached plus one further term (0: unused)
};

/// Throws PrecisionExhausted when d_n < 1e-14 before the stop rule is met.
CFExpansion cf_expand(double alpha, StopRule stop);
CFExpansion cf_expand_ratio(double num, double den, StopRule stop);

/// N(alpha, eps) = inf{n : d_n <= eps}. Throws ExpansionTooShort if not reached.
int first_below(const CFExpansion& e, double eps);

struct ObstacleConfig {
    double A{0.0};
    double B{0.0};
    double Q{0.0};
    double Qbar{0.0};
    int sigma{1};
    double D{0.0};
    std::optional<double> Qprime;
    std::optional<double> b;
    int N{0};                       // only meaningful for the continued-fraction route
    bool floor_boundary{false};     // floor argument within 1e-13 of an integer
};

/// Parameters from the continued fraction of alpha = omega2/omega1 at eps = 2r/omega1.
/// Requires 0 < omega2 < omega1 (OctantError) and eps < 1.
ObstacleConfig obstacle_params_cf(const Direction& omega, double r);

struct Fraction {
    std::int64_t p{0};
    std::int64_t q{1};
};

struct FareyPair {
    Fraction left;
    Fraction right;
    std::int64_t order{1};
};

/// Consecutive elements p/q < alpha < p'/q' of the Farey sequence of order qmax.
FareyPair farey_neighbors(double alpha, std::int64_t qmax);
FareyPair farey_neighbors_ratio(double num, double den, std::int64_t qmax);

/// Same parameters through the Farey neighbours at order floor(1/eps); fills D, Q', b.
ObstacleConfig obstacle_params_farey(const Direction& omega, double r);

struct ThreeObstacles {
    LatticePoint first;   // (q, p)
    LatticePoint second;  // (qbar, pbar)
    int det{1};           // q pbar - qbar p
};

/// Lattice translates that can be hit next: first, second and first + second.
/// det = q pbar - qbar p equals -sigma for the sigma = (-1)^N of obstacle_params_cf.
ThreeObstacles three_obstacle_lattice(const Direction& omega, double r);

/// sign(q * alpha - p) for alpha = num/den, evaluated without cancellation loss.
int compare_fraction(double num, double den, std::int64_t p, std::int64_t q);

}  // namespace lorentz::arithmetic
