#include "lorentz/arithmetic.hpp"

#include <cmath>
#include <limits>

#include "lorentz/errors.hpp"

namespace lorentz::arithmetic {

namespace {

constexpr std::int64_t kMaxExact = std::int64_t{1} << 53;

// signed q*num - p*den
double signed_gap(double num, double den, std::int64_t p, std::int64_t q) {
    return diff_of_products(static_cast<double>(q), num, static_cast<double>(p), den);
}

void check_first_octant(const Direction& omega) {
    if (!(omega.s > 0.0 && omega.s < omega.c))
        throw OctantError("direction must satisfy 0 < omega2 < omega1; reduce by lattice symmetry first");
}

double eps_of(const Direction& omega, double r) {
    if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
    const double eps = 2.0 * r / omega.c;
    if (!(eps < 1.0)) throw InvalidArgument("eps = 2r/omega1 must be < 1");
    return eps;
}

double qbar_of(double A, double B, double Q) { return (1.0 - Q * (1.0 - B)) / (1.0 - A); }

}  // namespace

int compare_fraction(double num, double den, std::int64_t p, std::int64_t q) {
    const double g = signed_gap(num, den, p, q);
    return (g > 0) - (g < 0);
}

CFExpansion cf_expand(double alpha, StopRule stop) { return cf_expand_ratio(alpha, 1.0, stop); }

CFExpansion cf_expand_ratio(double num, double den, StopRule stop) {
    if (!(num > 0.0 && den > 0.0 && num < den)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (stop.max_digits <= 0 && !(stop.eps > 0.0)) throw InvalidArgument("stop rule needs max_digits or eps");
    CFExpansion e;
    e.num = num;
    e.den = den;
    e.alpha = num / den;
    e.p = {1, 0};
    e.q = {0, 1};
    e.d = {1.0, e.alpha};

    auto done = [&]() {
        const std::size_t n = e.d.size() - 1;
        if (stop.max_digits > 0 && static_cast<int>(e.digits.size()) >= stop.max_digits) return true;
        if (stop.eps > 0.0 && n >= 1 && e.d[n - 1] <= stop.eps) return true;
        return false;
    };

    while (!done()) {
        const std::size_t n = e.d.size() - 1;
        if (e.d[n] < 1e-14) throw PrecisionExhausted("d_n fell below 1e-14 before the stop rule was met");
        std::int64_t a = static_cast<std::int64_t>(std::floor(e.d[n - 1] / e.d[n]));
        if (a < 1) a = 1;
        // Correct the float quotient so that 0 <= d_{n+1} < d_n.
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // d_{n+1} = (-1)^n (q alpha - p)
        double dnext = 0.0;
        std::int64_t pn = 0, qn = 0;
        for (int guard = 0; guard < 4; ++guard) {
            pn = a * e.p[n] + e.p[n - 1];
            qn = a * e.q[n] + e.q[n - 1];
            if (qn > kMaxExact || pn > kMaxExact) throw PrecisionExhausted("convergent exceeds exact double range");
            dnext = sgn * signed_gap(num, den, pn, qn) / den;
            if (dnext < 0.0 && a > 1) {
                --a;
            } else if (dnext >= e.d[n]) {
                ++a;
            } else {
                break;
            }
        }
        e.digits.push_back(a);
        e.p.push_back(pn);
        e.q.push_back(qn);
        e.d.push_back(std::abs(dnext));
    }
    return e;
}

int first_below(const CFExpansion& e, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
    for (std::size_t n = 0; n < e.d.size(); ++n)
        if (e.d[n] <= eps) return static_cast<int>(n);
    throw ExpansionTooShort("expansion does not reach eps; extend it");
}

ObstacleConfig obstacle_params_cf(const Direction& omega, double r) {
    check_first_octant(omega);
    const double eps = eps_of(omega, r);
    const CFExpansion e = cf_expand_ratio(omega.s, omega.c, {0, eps});
    const int N = first_below(e, eps);
    const double dN = e.d[N];
    const double dN1 = e.d[N - 1];

    ObstacleConfig c;
    c.N = N;
    c.D = dN / eps;
    c.A = 1.0 - c.D;
    const double z = (eps - dN1) / dN;
    const double k = std::floor(z);
    c.floor_boundary = std::abs(z - std::nearbyint(z)) < 1e-13;
    c.B = 1.0 - dN1 / eps - k * c.D;
    c.Q = eps * static_cast<double>(e.q[N]);
    c.sigma = (N % 2 == 0) ? 1 : -1;
    c.Qbar = qbar_of(c.A, c.B, c.Q);
    return c;
}

FareyPair farey_neighbors(double alpha, std::int64_t qmax) { return farey_neighbors_ratio(alpha, 1.0, qmax); }

FareyPair farey_neighbors_ratio(double num, double den, std::int64_t qmax) {
    if (qmax < 1) throw InvalidArgument("Farey order must be >= 1");
    if (!(num > 0.0 && num < den)) throw InvalidArgument("alpha must lie in (0, 1)");
    const double alpha = num / den;
    Fraction L{0, 1}, R{1, 1};
    // alpha < P/Q  <=>  q alpha - p < 0
    auto below = [&](std::int64_t p, std::int64_t q) { return compare_fraction(num, den, p, q) < 0; };
    while (L.q + R.q <= qmax) {
        const Fraction M{L.p + R.p, L.q + R.q};
        if (below(M.p, M.q)) {
            // R_k = (R.p + k L.p)/(R.q + k L.q), largest k with alpha < R_k
            const std::int64_t kq = (qmax - R.q) / L.q;
            const double est = (static_cast<double>(R.p) - alpha * R.q) / (alpha * L.q - static_cast<double>(L.p));
            std::int64_t k = std::isfinite(est) ? std::min<std::int64_t>(kq, static_cast<std::int64_t>(std::ceil(est)) - 1) : kq;
            k = std::max<std::int64_t>(k, 1);
            while (k > 1 && !below(R.p + k * L.p, R.q + k * L.q)) --k;
            while (k < kq && below(R.p + (k + 1) * L.p, R.q + (k + 1) * L.q)) ++k;
            R = {R.p + k * L.p, R.q + k * L.q};
        } else {
            // L_k = (L.p + k R.p)/(L.q + k R.q), largest k with L_k < alpha
            const std::int64_t kq = (qmax - L.q) / R.q;
            const double est = (alpha * L.q - static_cast<double>(L.p)) / (static_cast<double>(R.p) - alpha * R.q);
            std::int64_t k = std::isfinite(est) ? std::min<std::int64_t>(kq, static_cast<std::int64_t>(std::ceil(est)) - 1) : kq;
            k = std::max<std::int64_t>(k, 1);
            while (k > 1 && below(L.p + k * R.p, L.q + k * R.q)) --k;
            while (k < kq && !below(L.p + (k + 1) * R.p, L.q + (k + 1) * R.q)) ++k;
            L = {L.p + k * R.p, L.q + k * R.q};
        }
    }
    return {L, R, qmax};
}

ObstacleConfig obstacle_params_farey(const Direction& omega, double r) {
    check_first_octant(omega);
    const double eps = eps_of(omega, r);
    const auto qmax = static_cast<std::int64_t>(std::floor(1.0 / eps));
    const FareyPair f = farey_neighbors_ratio(omega.s, omega.c, qmax);
    const double dl = signed_gap(omega.s, omega.c, f.left.p, f.left.q) / omega.c;     // q alpha - p > 0
    const double dr = -signed_gap(omega.s, omega.c, f.right.p, f.right.q) / omega.c;  // p' - q' alpha > 0

    bool use_left;
    if (dr > eps) {
        use_left = true;   // case (i)
    } else if (dl > eps) {
        use_left = false;  // case (iii)
    } else {
        use_left = f.left.q < f.right.q;  // case (ii)
    }
    const double qN = static_cast<double>(use_left ? f.left.q : f.right.q);
    const double qO = static_cast<double>(use_left ? f.right.q : f.left.q);
    const double dN = use_left ? dl : dr;

    ObstacleConfig c;
    c.sigma = use_left ? -1 : 1;
    c.D = dN / eps;
    c.A = 1.0 - c.D;
    c.Q = eps * qN;
    c.Qprime = eps * qO;
    const double b = (c.Q - 1.0 + *c.Qprime * c.D) / c.Q;
    c.b = b;
    const double z = b / c.D;
    c.floor_boundary = std::abs(z - std::nearbyint(z)) < 1e-13;
    c.B = b - std::floor(z) * c.D;
    c.Qbar = qbar_of(c.A, c.B, c.Q);
    return c;
}

ThreeObstacles three_obstacle_lattice(const Direction& omega, double r) {
    check_first_octant(omega);
    const double eps = eps_of(omega, r);
    const CFExpansion e = cf_expand_ratio(omega.s, omega.c, {0, eps});
    const int N = first_below(e, eps);
    const ObstacleConfig c = obstacle_params_cf(omega, r);
    const double qbar_real = c.Qbar / eps;
    const auto qbar = static_cast<std::int64_t>(std::llround(qbar_real));
    if (std::abs(qbar_real - static_cast<double>(qbar)) > 1e-6 * std::max(1.0, qbar_real))
        throw PrecisionExhausted("Qbar/eps is not an integer to working precision");
    const auto pbar = static_cast<std::int64_t>(std::llround(static_cast<double>(qbar) * e.alpha));
    ThreeObstacles t;
    t.first = {e.q[N], e.p[N]};
    t.second = {qbar, pbar};
    t.det = static_cast<int>(e.q[N] * pbar - qbar * e.p[N]);
    return t;
}

}  // namespace lorentz::arithmetic
