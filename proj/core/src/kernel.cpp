#include "lorentz/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lorentz/constants.hpp"
#include "lorentz/quadrature.hpp"

namespace lorentz::kernel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log1p(x) - x without cancellation for small x.
double log1p_minus(double x) {
    if (std::abs(x) < 1e-3) {
        double term = x, sum = 0.0;
        for (int k = 2; k <= 8; ++k) {
            term *= -x;
            sum += term / k;
        }
        return sum;
    }
    return std::log1p(x) - x;
}

double pos(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

Transfer limit_transfer(const ObstacleConfig& cfg, double hp) {
    const double s = cfg.sigma;
    const double sh = s * hp;
    if (sh >= 1.0 - 2.0 * cfg.A && sh <= 1.0) return {cfg.Q, hp - 2.0 * s * (1.0 - cfg.A)};
    if (sh >= -1.0 && sh <= -1.0 + 2.0 * cfg.B) return {cfg.Qbar, hp + 2.0 * s * (1.0 - cfg.B)};
    return {cfg.Q + cfg.Qbar, hp + 2.0 * s * (cfg.A - cfg.B)};
}

Canonical canonical(double h, double hp) {
    if (std::abs(hp) <= h) return {h, hp};
    if (std::abs(h) <= hp) return {hp, h};
    if (std::abs(hp) <= -h) return {-h, -hp};
    return {-hp, -h};
}

double p_simple(double S, double h, double hp) {
    const auto [a, b] = canonical(h, hp);
    const double x = 2.0 / S - (1.0 + b);
    if (x <= 0.0) return 0.0;
    if (x >= a - b) return k3OverPiSq;
    return k3OverPiSq * x / (a - b);
}

double p_full(double S, double h, double hp) {
    if (S == 0.0) return k3OverPiSq;
    const double eta = 0.5 * std::abs(h - hp);
    const double zeta = 0.5 * std::abs(h + hp);
    // Every term is shifted by -1 before it is formed, so that the division by
    // S*eta does not amplify the rounding of quantities close to 1.
    const double u = S - 1.0;
    const double k = 0.5 * ((S - 2.0) + S * zeta);  // (S + S zeta)/2 - 1
    if (eta == 0.0) return k < 0.0 ? k3OverPiSq : 0.0;
    const double e = S * eta;
    const double t1 = std::min(e, pos(-u));
    const double t2 = pos(e - std::abs(u));
    const double t3 = pos(std::min(u - 0.5 * e, 0.5 * e) - std::max(k, 0.0));
    const double t4 = pos(std::min(u - 0.5 * e, 0.0) - std::max(k, -0.5 * e));
    return k3OverPiSq * (t1 + t2 + t3 + t4) / e;
}

double pi_kernel(double h, double hp) {
    const auto [a, b] = canonical(h, hp);
    if (a == b) return k6OverPiSq / (1.0 + a);
    return k6OverPiSq * std::log1p((a - b) / (1.0 + b)) / (a - b);
}

Breaks s_breaks(double h, double hp) {
    const auto [a, b] = canonical(h, hp);
    return {2.0 / (1.0 + a), 1.0 + b > 0.0 ? 2.0 / (1.0 + b) : kInf};
}

double p_tail(double S0, double h, double hp) {
    const auto [a, b] = canonical(h, hp);
    const double S1 = 2.0 / (1.0 + a);
    if (1.0 + b <= 0.0) return kInf;
    const double S2 = 2.0 / (1.0 + b);
    double g = pos(S1 - S0);
    const double m = std::max(S0, S1);
    if (m < S2 && a > b) {
        const double u = S2 - m;
        const double num = 2.0 * log1p_minus(u / m) + 2.0 * u * u / (m * S2);
        g += num / (a - b);
    }
    return k3OverPiSq * g;
}

double p_tail2(double S0, double h, double hp) {
    const auto [a, b] = canonical(h, hp);
    const double S1 = 2.0 / (1.0 + a);
    if (1.0 + b <= 0.0) return kInf;
    const double S2 = 2.0 / (1.0 + b);
    const double d = pos(S1 - S0);
    double g = 0.5 * d * d;
    const double m = std::max(S0, S1);
    if (m < S2 && a > b) {
        const double u = S2 - m;
        const double x = u / m;
        const double j = u * u * (m - 2.0 * S0) / (m * S2) - 2.0 * S0 * log1p_minus(x);
        g += j / (a - b);
    }
    return k3OverPiSq * g;
}

double p_bin_mass(double S0, double S1, double h0, double h1, double hp, double tol) {
    std::vector<double> br{hp, -hp};
    for (double S : {S0, S1})
        if (S > 1.0 && std::isfinite(S)) {
            br.push_back(2.0 / S - 1.0);
            br.push_back(1.0 - 2.0 / S);
        }
    auto f = [&](double h) {
        const double hi = std::isfinite(S1) ? p_tail(S1, h, hp) : 0.0;
        return p_tail(S0, h, hp) - hi;
    };
    return quad::tanh_sinh(f, h0, h1, br, tol);
}

double integrate_p_over_s(double h, double hp, double tol) {
    const auto [S1, S2] = s_breaks(h, hp);
    auto f = [&](double S) { return p_simple(S, h, hp); };
    double total = quad::gauss_kronrod(f, 0.0, S1, {}, tol);
    if (!(S2 > S1)) return total;
    if (!std::isfinite(S2)) return kInf;
    if (S2 > 8.0 * S1) {
        auto g = [&](double v) {
            const double S = std::exp(v);
            return p_simple(S, h, hp) * S;
        };
        total += quad::gauss_kronrod(g, std::log(S1), std::log(S2), {}, tol);
    } else {
        total += quad::gauss_kronrod(f, S1, S2, {}, tol);
    }
    return total;
}

double density_mu(double A, double B, double Q, int sigma) {
    if (sigma != 1 && sigma != -1) return 0.0;
    return 0.5 * density_nu(A, B, Q);
}

double density_nu(double A, double B, double Q) {
    if (!(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0 - A && Q > 0.0 && Q < 1.0 / (2.0 - A - B)))
        return 0.0;
    return k12OverPiSq / (1.0 - A);
}

double density_lambda(double Q, double Qp, double D) {
    if (!(Q > 0.0 && Q < 1.0 && Qp > 0.0 && Qp < 1.0 && D > 0.0 && D < 1.0)) return 0.0;
    const double cut = (1.0 - Q) / Qp;
    const bool first = Q + Qp > 1.0 && D < cut;
    const bool second = Q < Qp && D > cut;
    return (first || second) ? k12OverPiSq / Q : 0.0;
}

ObstacleConfig sample_mu(Rng& rng, long* proposals) {
    for (;;) {
        const double A = uniform01(rng);
        const double Bp = uniform01(rng);
        const double Q = uniform01(rng);
        if (proposals) ++*proposals;
        if (Q > 0.0 && A < 1.0 && Q * (1.0 + (1.0 - A) * (1.0 - Bp)) < 1.0) {
            ObstacleConfig c;
            c.A = A;
            c.B = (1.0 - A) * Bp;
            c.Q = Q;
            c.D = 1.0 - A;
            c.Qbar = (1.0 - Q * (1.0 - c.B)) / (1.0 - A);
            c.sigma = (rng() >> 63) ? 1 : -1;
            return c;
        }
    }
}

Transfer sample_P(double hp, Rng& rng) { return limit_transfer(sample_mu(rng), hp); }

QQD sample_lambda(Rng& rng, long* proposals) {
    // Q' = 1 - Q v maps the uniform (Q, v, D) cube onto the support of lambda
    // with Jacobian Q, cancelling the 1/Q of the density.
    for (;;) {
        const double Q = uniform01(rng);
        const double v = uniform01(rng);
        const double D = uniform01(rng);
        if (proposals) ++*proposals;
        if (Q == 0.0 || D == 0.0) continue;
        const double Qp = 1.0 - Q * v;
        const double cut = (1.0 - Q) / Qp;
        if (D < cut || Q < Qp) return {Q, Qp, D};
    }
}

ABQ phi_map(const QQD& x) { return {1.0 - x.D, (x.Q - 1.0 + x.Qp * x.D) / x.Q, x.Q}; }

ABQ psi_map(const ABQ& x) {
    const double w = 1.0 - x.A;
    return {x.A, x.B - std::floor(x.B / w) * w, x.Q};
}

int count_M(double A, double B, double Q) { return Q < 1.0 / (2.0 - A - B) ? 1 : 0; }

CountM brute_count_M(double A, double B, double Q) {
    const double w = 1.0 - A;
    const double lam[2][2] = {{A - A / Q, std::min(1.0 - A / Q, 0.0)},
                              {std::max(2.0 - A - 1.0 / Q, 0.0), 1.0 - A / Q}};
    CountM out{0, false};
    for (const auto& I : lam) {
        if (!(I[1] > I[0])) continue;
        const auto n0 = static_cast<long long>(std::floor((I[0] - B) / w)) - 1;
        const auto n1 = static_cast<long long>(std::ceil((I[1] - B) / w)) + 1;
        for (long long n = n0; n <= n1; ++n) {
            const double y = B + static_cast<double>(n) * w;
            if (std::abs(y - I[0]) < 1e-13 || std::abs(y - I[1]) < 1e-13) out.degenerate = true;
            if (y > I[0] && y < I[1]) ++out.count;
        }
    }
    return out;
}

}  // namespace lorentz::kernel
