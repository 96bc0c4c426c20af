#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentz/arithmetic.hpp"
#include "lorentz/errors.hpp"

using namespace lorentz;
using namespace lorentz::arithmetic;
using doctest::Approx;

namespace {
const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);
const double kSilver = std::sqrt(2.0) - 1.0;

// Direction with slope alpha and eps = 2r/omega1.
std::pair<Direction, double> at(double alpha, double eps) {
    const auto w = Direction::from_vector(1.0, alpha);
    return {w, 0.5 * eps * w.c};
}
}  // namespace

TEST_CASE("golden ratio: digits 1, Fibonacci denominators, d_n = alpha^n") {
    const auto e = cf_expand(kGolden, {25, 0.0});
    REQUIRE(e.digits.size() >= 25);
    for (auto a : e.digits) CHECK(a == 1);
    const std::int64_t fib[] = {0, 1, 1, 2, 3, 5, 8, 13, 21, 34};
    for (int n = 0; n < 10; ++n) CHECK(e.q[n] == fib[n]);
    for (int n = 0; n < 20; ++n) CHECK(e.d[n] == Approx(std::pow(kGolden, n)).epsilon(1e-10));
    CHECK(5 * e.d[6] + 8 * e.d[5] == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("silver ratio: digits 2, d_n = (sqrt2 - 1)^n") {
    const auto e = cf_expand(kSilver, {18, 0.0});
    for (auto a : e.digits) CHECK(a == 2);
    for (std::size_t n = 0; n < e.d.size(); ++n) CHECK(e.d[n] == Approx(std::pow(kSilver, double(n))).epsilon(1e-9));
}

TEST_CASE("expansion invariants for random alpha") {
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const double alpha = u(g);
        CFExpansion e;
        try {
            e = cf_expand(alpha, {0, 1e-9});
        } catch (const PrecisionExhausted&) {
            continue;
        }
        CHECK(e.d[0] == 1.0);
        CHECK(e.d[1] == Approx(alpha).epsilon(1e-15));
        double prod = 1.0, x = alpha;
        for (std::size_t n = 1; n + 1 < e.d.size(); ++n) {
            CHECK(e.d[n + 1] < e.d[n]);
            CHECK(e.d[n + 1] == Approx(-double(e.digits[n - 1]) * e.d[n] + e.d[n - 1]).epsilon(1e-8));
            CHECK(double(e.q[n]) * e.d[n + 1] + double(e.q[n + 1]) * e.d[n] == Approx(1.0).epsilon(1e-12));
        }
        for (std::size_t n = 1; n < std::min<std::size_t>(e.d.size(), 8); ++n) {
            prod *= x;
            x = 1.0 / x - std::floor(1.0 / x);
            CHECK(e.d[n] == Approx(prod).epsilon(1e-10));
        }
    }
}

TEST_CASE("first_below: golden example and edge") {
    const auto e = cf_expand(kGolden, {20, 0.0});
    CHECK(first_below(e, 0.1) == 5);
    CHECK(first_below(e, 1.0) == 0);
}

TEST_CASE("N(alpha, eps) / ln(1/eps) averages to 12 ln2 / pi^2") {
    std::mt19937_64 g(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double eps = 1e-8;
    double sum = 0.0;
    int n = 0;
    while (n < 1000) {
        try {
            const auto e = cf_expand(u(g), {0, eps});
            sum += first_below(e, eps) / std::log(1.0 / eps);
            ++n;
        } catch (const LorentzError&) {
        }
    }
    CHECK(sum / n == Approx(12.0 * std::log(2.0) / (M_PI * M_PI)).epsilon(0.03));
}

TEST_CASE("obstacle parameters: golden example, eps = 0.1") {
    const auto [w, r] = at(kGolden, 0.1);
    const auto c = obstacle_params_cf(w, r);
    CHECK(c.A == Approx(0.098301).epsilon(1e-5));
    CHECK(c.B == Approx(0.442719).epsilon(1e-5));
    CHECK(c.Q == Approx(0.5).epsilon(1e-12));
    CHECK(c.Qbar == Approx(0.8).epsilon(1e-10));
    CHECK(c.N == 5);
    CHECK(c.Qbar * (1 - c.A) + c.Q * (1 - c.B) == Approx(1.0).epsilon(1e-12));
    CHECK(1.0 / (2 - c.A - c.B) == Approx(0.685413).epsilon(1e-5));
    CHECK(c.sigma == -1);
    const auto f = obstacle_params_farey(w, r);
    CHECK(f.A == Approx(c.A).epsilon(1e-10));
    CHECK(f.B == Approx(c.B).epsilon(1e-10));
    CHECK(f.Q == Approx(c.Q).epsilon(1e-10));
    CHECK(f.sigma == c.sigma);
    REQUIRE(f.D != 0.0);
    CHECK(f.D == Approx(1 - f.A).epsilon(1e-12));
}

TEST_CASE("obstacle parameters: invariants and CF/Farey agreement on random inputs") {
    std::mt19937_64 g(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int compared = 0;
    for (int it = 0; it < 2000; ++it) {
        const double alpha = 0.001 + 0.998 * u(g);
        const double eps = 0.5 * std::exp(std::log(2e-7) * u(g));
        const auto [w, r] = at(alpha, eps);
        ObstacleConfig c, f;
        try {
            c = obstacle_params_cf(w, r);
            f = obstacle_params_farey(w, r);
        } catch (const LorentzError&) {
            continue;
        }
        if (c.floor_boundary || f.floor_boundary) continue;
        ++compared;
        CHECK(c.A + c.B <= 1.0 + 1e-12);
        CHECK(c.Q > 0.0);
        CHECK(c.Q < 1.0 / (2.0 - c.A - c.B) + 1e-12);
        CHECK(c.Qbar > c.Q);
        CHECK(c.Qbar * (1 - c.A) + c.Q * (1 - c.B) == Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(f.A - c.A) < 1e-9);
        CHECK(std::abs(f.B - c.B) < 1e-9);
        CHECK(std::abs(f.Q - c.Q) < 1e-9);
        CHECK(f.sigma == c.sigma);
    }
    CHECK(compared > 1900);
}

TEST_CASE("eps > 1/2: Q = Qbar and the two routes differ by an equivalent relabelling") {
    // With Q = Qbar, (A, B, sigma) and (B, A, -sigma) define the same limit map.
    std::mt19937_64 g(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 500; ++it) {
        const double alpha = 0.01 + 0.98 * u(g), eps = 0.5 + 0.49 * u(g);
        const auto [w, r] = at(alpha, eps);
        const auto c = obstacle_params_cf(w, r);
        const auto f = obstacle_params_farey(w, r);
        if (c.floor_boundary || f.floor_boundary) continue;
        const bool same = std::abs(f.A - c.A) < 1e-9 && std::abs(f.B - c.B) < 1e-9 && f.sigma == c.sigma;
        const bool swapped = std::abs(c.Q - c.Qbar) < 1e-12 && std::abs(f.A - c.B) < 1e-9 &&
                             std::abs(f.B - c.A) < 1e-9 && f.sigma == -c.sigma;
        CHECK((same || swapped));
        CHECK(std::abs(f.Q - c.Q) < 1e-9);
    }
}

TEST_CASE("obstacle parameters reject directions outside the first octant") {
    CHECK_THROWS_AS(obstacle_params_cf(Direction::from_vector(1.0, 1.5), 0.01), OctantError);
    CHECK_THROWS_AS(obstacle_params_cf(Direction::from_vector(1.0, -0.2), 0.01), OctantError);
}

TEST_CASE("Farey neighbours: small order by enumeration and identities") {
    const auto p = farey_neighbors(kGolden, 3);
    CHECK(p.left.p == 1);
    CHECK(p.left.q == 2);
    CHECK(p.right.p == 2);
    CHECK(p.right.q == 3);
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 500; ++it) {
        const double a = u(g);
        const std::int64_t Q = 1 + static_cast<std::int64_t>(u(g) * 5000);
        const auto f = farey_neighbors(a, Q);
        CHECK(f.right.p * f.left.q - f.left.p * f.right.q == 1);
        CHECK(f.left.q + f.right.q > Q);
        CHECK(f.left.q <= Q);
        CHECK(f.right.q <= Q);
        CHECK(compare_fraction(a, 1.0, f.left.p, f.left.q) > 0);
        CHECK(compare_fraction(a, 1.0, f.right.p, f.right.q) < 0);
    }
}

TEST_CASE("three obstacles: golden example and unit determinant") {
    const auto [w, r] = at(kGolden, 0.1);
    const auto t = three_obstacle_lattice(w, r);
    CHECK(t.first.m == 5);
    CHECK(t.first.n == 3);
    CHECK(t.second.m == 8);
    CHECK(t.second.n == 5);
    CHECK(t.first.m * t.second.n - t.second.m * t.first.n == t.det);
    CHECK(t.det == -obstacle_params_cf(w, r).sigma);
}

TEST_CASE("compare_fraction resolves near-ties") {
    CHECK(compare_fraction(1.0, 3.0, 1, 3) == 0);
    CHECK(compare_fraction(std::nextafter(1.0, 2.0), 3.0, 1, 3) == 1);
    CHECK(compare_fraction(std::nextafter(1.0, 0.0), 3.0, 1, 3) == -1);
}
