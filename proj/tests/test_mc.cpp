#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lorentz/mc.hpp"

using namespace lorentz;
using namespace lorentz::mc;
using doctest::Approx;

namespace {
double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }
}  // namespace

TEST_CASE("exact bin masses are probability vectors") {
    KernelBins kb;
    for (double hp : {-0.9, 0.0, 0.6}) CHECK(sum(kernel_bin_masses(kb, hp)) == Approx(1.0).epsilon(1e-9));
    ConfigBins cb;
    CHECK(sum(mu_bin_masses(cb)) == Approx(1.0).epsilon(1e-8));
    CHECK(sum(equilibrium_bin_masses(SHBins::standard())) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("bin indexing") {
    KernelBins kb;
    CHECK(kb.index(0.0, -1.0) == 0);
    CHECK(kb.index(4.5, 0.0) == kb.size() - 1);
    ConfigBins cb;
    CHECK(cb.index(0.01, 0.01, 0.01, -1) != cb.index(0.01, 0.01, 0.01, 1));
}

TEST_CASE("direction-averaged billiard statistics are close to P at small r") {
    const auto est = direction_averaged_kernel_estimate(0.0, 1e-3, 100000, 77);
    CHECK(est.total == Approx(1.0).epsilon(1e-9));
    CHECK(est.deviation.l1 < 0.05);
}

TEST_CASE("Cesaro weights are normalized") {
    CesaroOptions o;
    o.points_per_decade = 200;
    const auto g = Direction::from_vector(1.0, 0.5 * (std::sqrt(5.0) - 1.0));
    const auto est = cesaro_kernel_estimate(0.0, g, 1e-3, o);
    CHECK(sum(est.weights) == Approx(1.0).epsilon(1e-10));
    CHECK(est.normalization == Approx(std::log(o.r_max / 1e-3)));
}

TEST_CASE("Markov step: unit speed, flight consumed, rotation by pi - 2 arcsin h") {
    Rng rng(12);
    MarkovState st{{0.2, 0.7}, Direction::from_angle(0.3), 0.4, 0.25, 0.0};
    for (int k = 0; k < 1000; ++k) {
        const auto nx = markov_step(st, rng);
        CHECK(nx.t == Approx(st.t + st.s));
        const double turn = std::remainder(nx.omega.theta - st.omega.theta - (M_PI - 2 * std::asin(st.h)), 2 * M_PI);
        CHECK(std::abs(turn) < 1e-9);
        CHECK(nx.x.x >= 0.0);
        CHECK(nx.x.x < 1.0);
        CHECK(nx.s > 0.0);
        CHECK(std::abs(nx.h) <= 1.0);
        st = nx;
    }
}

TEST_CASE("E is stationary for the extended chain") {
    const auto table = kernel::EquilibriumTable::build();
    const auto t = markov_stationary_test(200000, 5.0, 4242, table);
    CHECK(t.chi2.p_value > 1e-3);
    CHECK(t.mean_flight == Approx(0.5).epsilon(0.05));
}

TEST_CASE("ensembles: histograms are fractions and runs are reproducible") {
    InitialData f;
    f.kind = InitialData::Kind::Cosine;
    const auto a = billiard_ensemble(f, 0.02, 2000, {0.5, 1.0}, 9);
    const auto b = billiard_ensemble(f, 0.02, 2000, {0.5, 1.0}, 9);
    REQUIRE(a.size() == 2);
    CHECK(sum(a[1].xw) == Approx(1.0).epsilon(1e-12));
    CHECK(a[1].xw == b[1].xw);
    const auto table = kernel::EquilibriumTable::build();
    const auto m = markov_ensemble(f, 2000, {1.0}, 9, table);
    CHECK(sum(m[0].xw) == Approx(1.0).epsilon(1e-12));
    CHECK(sum(m[0].sh) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("consecutive configurations decorrelate at small r") {
    const auto h = hypothesis_h(1e-3, 2000, 20, 5);
    CHECK(h.pairs > 30000);
    CHECK(std::abs(h.corr_Q) < 0.1);
    CHECK(std::abs(h.mean_sigma_product) < 0.1);
}
