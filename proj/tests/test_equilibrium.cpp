#include <doctest.h>

#include <cmath>

#include "lorentz/constants.hpp"
#include "lorentz/equilibrium.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/stats.hpp"

using namespace lorentz;
using namespace lorentz::kernel;
using doctest::Approx;

TEST_CASE("E(0,h) = 1 and 0 <= E <= 1, nonincreasing in s") {
    CHECK(equilibrium_E(0.0, 0.3) == Approx(1.0).epsilon(1e-10));
    for (double h : {-0.99, -0.5, 0.0, 0.4, 0.97}) {
        CHECK(equilibrium_E(0.0, h) == Approx(1.0).epsilon(1e-10));
        double prev = 1.0 + 1e-12;
        for (double s : {0.1, 0.3, 0.5, 0.9, 1.5, 3.0, 7.0, 20.0}) {
            const double e = equilibrium_E(s, h);
            CHECK(e >= 0.0);
            CHECK(e <= prev);
            prev = e;
        }
    }
}

TEST_CASE("E solves -dE/ds = int 2 P(2s,h|h') dh'") {
    const double d = 1e-4;
    for (double s : {0.2, 0.7, 1.3, 4.0})
        for (double h : {-0.7, 0.1, 0.8}) {
            const double fd = -(equilibrium_E(s + d, h) - equilibrium_E(s - d, h)) / (2 * d);
            CHECK(std::abs(fd - equilibrium_dE(s, h)) < 1e-5);
        }
}

TEST_CASE("total mass of E is 1") { CHECK(equilibrium_total_mass() == Approx(1.0).epsilon(1e-8)); }

TEST_CASE("h-integral: series against quadrature and the 1/(pi^2 s^2) tail") {
    for (double s : {2.0, 3.5, 10.0}) CHECK(equilibrium_h_integral_series(s) == Approx(equilibrium_h_integral(s)).epsilon(1e-9));
    const double a50 = 50.0 * 50.0 * equilibrium_h_integral_series(50.0);
    const double a100 = 100.0 * 100.0 * equilibrium_h_integral_series(100.0);
    CHECK(a50 == Approx(kOneOverPiSq).epsilon(0.05));
    CHECK(std::abs(a100 - kOneOverPiSq) < std::abs(a50 - kOneOverPiSq));
    const double direct = quad::gauss_kronrod([](double s) { return equilibrium_h_integral_series(s); }, 5.0, 400.0, {}, 1e-12) +
                          equilibrium_tail_mass(400.0);
    CHECK(equilibrium_tail_mass(5.0) == Approx(direct).epsilon(1e-8));
}

TEST_CASE("bin masses add up") {
    const double a = equilibrium_bin_mass(0.0, 1.0, -1.0, 1.0);
    const double b = equilibrium_bin_mass(1.0, 2.0, -1.0, 0.0) + equilibrium_bin_mass(1.0, 2.0, 0.0, 1.0);
    const double c = equilibrium_bin_mass(2.0, INFINITY, -1.0, 1.0);
    CHECK(a + b + c == Approx(1.0).epsilon(1e-9));
    CHECK(c == Approx(equilibrium_tail_mass(2.0)).epsilon(1e-10));
}

TEST_CASE("L2 norm of E is at most 1") { CHECK(equilibrium_l2_tail(0.0) <= 1.0); }

TEST_CASE("table: nodes exact, interpolation close, sampler follows E") {
    const auto t = EquilibriumTable::build();
    CHECK(t.tail_constant() == Approx(kOneOverPiSq));
    CHECK(t(0.0, 0.25) == Approx(1.0).epsilon(1e-10));
    const std::size_t i = 100, j = 40;
    CHECK(t.at(i, j) == Approx(equilibrium_E(t.s_grid()[i], t.h_grid()[j])).epsilon(1e-10));
    double worst = 0.0;
    for (double s : {0.013, 0.51, 0.977, 1.63, 3.3, 12.0, 77.0})
        for (double h : {-0.91, -0.33, 0.05, 0.61}) worst = std::max(worst, std::abs(t(s, h) - equilibrium_E(s, h)));
    CHECK(worst < 1e-4);
    CHECK(t(t.s_max() * 2, 0.0) == 0.0);

    EquilibriumSampler smp(t);
    Rng rng(3);
    const double edges[] = {0.0, 0.25, 0.5, 1.0, 2.0, 5.0, INFINITY};
    std::vector<double> counts(12, 0.0), prob(12, 0.0);
    const int n = 400000;
    for (int k = 0; k < n; ++k) {
        const auto [s, h] = smp(rng);
        int a = 0;
        while (!(s < edges[a + 1])) ++a;
        counts[a * 2 + (h >= 0.0)] += 1.0;
    }
    for (int a = 0; a < 6; ++a) {
        prob[a * 2] = equilibrium_bin_mass(edges[a], edges[a + 1], -1.0, 0.0);
        prob[a * 2 + 1] = equilibrium_bin_mass(edges[a], edges[a + 1], 0.0, 1.0);
    }
    if (!std::isfinite(prob[10])) {
        const double tail = equilibrium_tail_mass(5.0);
        prob[10] = prob[11] = 0.5 * tail;
    }
    const auto chi = stats::chi_square(counts, prob);
    CHECK(chi.p_value > 1e-3);
}
