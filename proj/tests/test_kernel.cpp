#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentz/constants.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/quadrature.hpp"

using namespace lorentz;
using namespace lorentz::kernel;
using doctest::Approx;

TEST_CASE("limit transfer: the three cases by hand") {
    ObstacleConfig c;
    c.A = 0.5;
    c.B = 0.3;
    c.Q = 0.8;
    c.sigma = 1;
    c.Qbar = (1.0 - c.Q * (1.0 - c.B)) / (1.0 - c.A);
    CHECK(c.Qbar == Approx(0.88));
    auto t = limit_transfer(c, 0.9);
    CHECK(t.S == Approx(0.8));
    CHECK(t.h == Approx(-0.1));
    t = limit_transfer(c, -0.5);
    CHECK(t.S == Approx(0.88));
    CHECK(t.h == Approx(0.9));
    t = limit_transfer(c, -0.2);
    CHECK(t.S == Approx(1.68));
    CHECK(t.h == Approx(0.2));
}

TEST_CASE("P: hand-evaluated values") {
    CHECK(p_simple(1.0, 0.5, 0.0) == Approx(3.0 / (M_PI * M_PI)).epsilon(1e-14));
    CHECK(p_simple(1.0, 0.5, 0.0) == Approx(0.303964).epsilon(1e-6));
    CHECK(p_simple(4.0, 0.9, -0.8) == Approx(k3OverPiSq * 0.3 / 1.7).epsilon(1e-12));
    CHECK(p_simple(4.0, 0.5, 0.0) == 0.0);
    CHECK(p_full(1.0, 0.5, 0.0) == Approx(0.303964).epsilon(1e-6));
    CHECK(p_full(0.0, 0.2, 0.1) == Approx(k3OverPiSq));
    // Flat region: exactly 3/pi^2 for S <= 1 and |h'| <= h.
    CHECK(p_simple(0.7, 0.3, -0.2) == k3OverPiSq);
}

TEST_CASE("P: piecewise and simplified forms agree; symmetries are exact") {
    std::mt19937_64 g(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double S = 6.0 * std::abs(u(g)), h = u(g), hp = u(g);
        const double a = p_simple(S, h, hp);
        worst = std::max(worst, std::abs(a - p_full(S, h, hp)));
        CHECK(a >= 0.0);
        CHECK(a == p_simple(S, hp, h));
        CHECK(a == p_simple(S, -h, -hp));
        const double pi = pi_kernel(h, hp);
        CHECK(pi == pi_kernel(hp, h));
        CHECK(pi == pi_kernel(-h, -hp));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("Pi: hand values, diagonal limit and normalization") {
    CHECK(pi_kernel(0.5, 0.0) == Approx(12.0 / (M_PI * M_PI) * std::log(1.5)).epsilon(1e-12));
    CHECK(pi_kernel(0.5, 0.0) == Approx(0.492987).epsilon(1e-5));
    CHECK(pi_kernel(0.0, 0.0) == Approx(0.607927).epsilon(1e-6));
    CHECK(pi_kernel(0.3, 0.3 + 1e-9) == Approx(6.0 / (M_PI * M_PI * 1.3)).epsilon(1e-7));
    for (double hp : {-0.95, -0.4, 0.0, 0.6, 0.99}) {
        const double I = quad::tanh_sinh([&](double h) { return pi_kernel(h, hp); }, -1.0, 1.0, {hp, -hp}, 1e-12);
        CHECK(I == Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("integral of P over S is Pi") {
    CHECK(integrate_p_over_s(0.5, 0.0) == Approx(pi_kernel(0.5, 0.0)).epsilon(1e-8));
    for (double h : {-0.8, 0.1, 0.7})
        for (double hp : {-0.5, 0.2, 0.9})
            CHECK(integrate_p_over_s(h, hp) == Approx(pi_kernel(h, hp)).epsilon(1e-8));
}

TEST_CASE("P tails: closed forms against direct quadrature") {
    for (double S0 : {0.0, 0.5, 1.3, 3.0})
        for (double h : {-0.6, 0.2, 0.8})
            for (double hp : {-0.3, 0.5}) {
                const auto b = s_breaks(h, hp);
                const double direct = quad::gauss_kronrod([&](double S) { return p_simple(S, h, hp); }, S0, 2.0 / (1.0 + std::min(h, hp)) + 1.0,
                                                          {b.S1, b.S2}, 1e-14);
                CHECK(p_tail(S0, h, hp) == Approx(direct).epsilon(1e-10));
                const double d2 = quad::gauss_kronrod([&](double S) { return (S - S0) * p_simple(S, h, hp); }, S0,
                                                      2.0 / (1.0 + std::min(h, hp)) + 1.0, {b.S1, b.S2}, 1e-14);
                CHECK(p_tail2(S0, h, hp) == Approx(d2).epsilon(1e-10));
            }
}

TEST_CASE("normalization of P over a 41-point h' grid") {
    for (int k = 0; k <= 40; ++k) {
        const double hp = std::clamp(-1.0 + k * 0.05, -1.0 + 1e-12, 1.0 - 1e-12);
        const double I = quad::tanh_sinh([&](double h) { return p_tail(0.0, h, hp); }, -1.0, 1.0, {hp, -hp, 0.0}, 1e-12);
        CHECK(I == Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("bounds of P for S >= 4") {
    for (double S : {4.0, 5.5, 10.0, 40.0})
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= i; ++j) {
                const double h = -1.0 + i * 0.05, hp = -1.0 + j * 0.05;
                if (std::abs(hp) > h) continue;
                const double bound = (6.0 / (M_PI * M_PI * S)) * ((1.0 + hp < 2.0 / S) ? 1.0 : 0.0);
                CHECK(p_simple(S, h, hp) <= bound + 1e-15);
            }
    for (double S : {4.0, 8.0, 20.0}) {
        const double I = quad::tanh_sinh(
            [&](double h) {
                return quad::tanh_sinh([&](double hp) { return p_simple(S, h, hp); }, -1.0, 1.0, {h, -h, 2.0 / S - 1.0}, 1e-10);
            },
            -1.0, 1.0, {0.0, 2.0 / S - 1.0, 1.0 - 2.0 / S}, 1e-9);
        CHECK(I <= 48.0 / (M_PI * M_PI * S * S * S) + 1e-10);
    }
}

TEST_CASE("configuration densities: hand values and normalization") {
    CHECK(density_nu(0.098301, 0.442719, 0.5) == Approx(1.348395).epsilon(1e-5));
    CHECK(density_lambda(0.5, 0.9, 0.3) == Approx(2.431708).epsilon(1e-6));
    CHECK(density_nu(0.3, 0.5, 0.9) == 0.0);
    // nu integrates to one: int over A of (12/pi^2)/(1-A) * |{(B,Q)}| by nested quadrature.
    const double I = quad::gauss_kronrod(
        [&](double A) {
            return quad::gauss_kronrod(
                [&](double B) {
                    const double qmax = std::min(1.0, 1.0 / (2.0 - A - B));
                    return density_nu(A, B, 0.5 * qmax) * qmax;
                },
                0.0, 1.0 - A, {}, 1e-12);
        },
        0.0, 1.0, {}, 1e-11);
    CHECK(I == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("count_M: closed form against interval counting") {
    CHECK(count_M(0.3, 0.5, 0.5) == 1);
    CHECK(count_M(0.3, 0.5, 0.9) == 0);
    std::mt19937_64 g(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 100000; ++i) {
        const double A = u(g), Q = u(g);
        const double B = (1.0 - A) * u(g);
        if (B <= 0.0) continue;
        const auto b = brute_count_M(A, B, Q);
        if (b.degenerate) continue;
        ++checked;
        CHECK(b.count == count_M(A, B, Q));
    }
    CHECK(checked > 99000);
}

TEST_CASE("sample_mu: acceptance rate pi^2/12 and balanced sigma") {
    Rng rng(7);
    long proposals = 0;
    const int n = 1000000;
    long plus = 0;
    for (int i = 0; i < n; ++i) {
        const auto c = sample_mu(rng, &proposals);
        plus += c.sigma > 0;
        REQUIRE(c.A + c.B <= 1.0);
        REQUIRE(c.Q < 1.0 / (2.0 - c.A - c.B));
    }
    CHECK(double(n) / proposals == Approx(M_PI * M_PI / 12.0).epsilon(0.001 / 0.8225));
    CHECK(double(plus) / n == Approx(0.5).epsilon(0.005));
}

TEST_CASE("sample_P: mean flight over uniform h' is 1; h symmetric at h' = 0") {
    Rng rng(8);
    const int n = 1000000;
    double sum = 0.0, pos = 0.0;
    for (int i = 0; i < n; ++i) {
        const double hp = 2.0 * uniform01(rng) - 1.0;
        sum += 0.5 * sample_P(hp, rng).S;
        pos += sample_P(0.0, rng).h > 0.0;
    }
    // (1/2) int int int (S/2) P dS dh dh' = 1/2
    CHECK(sum / n == Approx(0.5).epsilon(0.005));
    CHECK(pos / n == Approx(0.5).epsilon(0.005));
}

TEST_CASE("pushforward maps") {
    const auto x = phi_map({0.5, 0.9, 0.3});
    CHECK(x.A == Approx(0.7));
    CHECK(x.B == Approx((0.5 - 1.0 + 0.9 * 0.3) / 0.5));
    const auto y = psi_map({0.7, -0.46, 0.5});
    CHECK(y.B == Approx(-0.46 + 2 * 0.3));
    CHECK(y.B >= 0.0);
    CHECK(y.B < 0.3);
}
