#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentz/parallel.hpp"
#include "lorentz/random.hpp"
#include "lorentz/stats.hpp"

using namespace lorentz;
using namespace lorentz::stats;
using doctest::Approx;

TEST_CASE("chi-square survival function: known values") {
    CHECK(chi2_sf(3.841458820694124, 1) == Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(18.307038053275146, 10) == Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(0.0, 4) == Approx(1.0));
    CHECK(chi2_sf(10.0, 2) == Approx(std::exp(-5.0)).epsilon(1e-12));
}

TEST_CASE("chi-square: exact fit passes, wrong law fails, sparse cells pooled") {
    std::vector<double> p = {0.25, 0.25, 0.5};
    CHECK(chi_square({250, 250, 500}, p).p_value == Approx(1.0));
    CHECK(chi_square({400, 100, 500}, p).p_value < 1e-10);
    const auto c = chi_square({500, 497, 1, 2}, {0.5, 0.497, 0.001, 0.002});
    CHECK(c.bins == 3);
}

TEST_CASE("chi-square p-values of a correct model are roughly uniform") {
    Rng rng(101);
    int low = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> counts(10, 0.0), prob(10, 0.1);
        for (int i = 0; i < 2000; ++i) counts[static_cast<int>(uniform01(rng) * 10)] += 1;
        low += chi_square(counts, prob).p_value < 0.1;
    }
    CHECK(low > 20);
    CHECK(low < 65);
}

TEST_CASE("axis, deviations and slopes") {
    Axis a{4, 0.0, 2.0};
    CHECK(a.index(-0.1) == -1);
    CHECK(a.index(0.0) == 0);
    CHECK(a.index(1.99) == 3);
    CHECK(a.index(2.0) == 4);
    CHECK(a.edge(2) == Approx(1.0));
    const auto d = compare_masses({0.11, 0.5, 0.0001}, {0.1, 0.5, 0.0002}, 0.01);
    CHECK(d.checked == 2);
    CHECK(d.max_rel == Approx(0.1));
    CHECK(loglog_slope({1, 10, 100}, {3, 300, 30000}) == Approx(2.0));
    MeanVar mv;
    for (double v : {1.0, 2.0, 3.0, 4.0}) mv.add(v);
    CHECK(mv.mean == Approx(2.5));
    CHECK(mv.stderr_mean() == Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("random streams are reproducible and distinct") {
    auto a = make_stream(5, 1), b = make_stream(5, 1), c = make_stream(5, 2);
    CHECK(a() == b());
    CHECK(a() != c());
    double u = uniform01(a);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("parallel partitions do not depend on the thread count") {
    auto run = [](int t) {
        set_threads(t);
        std::vector<double> partial(100, 0.0);
        parallel_chunks(100000, 1000, [&](std::size_t b, std::size_t e) {
            double s = 0.0;
            for (std::size_t i = b; i < e; ++i) s += 1.0 / (1.0 + i);
            partial[b / 1000] = s;
        });
        double s = 0.0;
        for (double v : partial) s += v;
        return s;
    };
    const double one = run(1), four = run(4);
    CHECK(one == four);
    set_threads(0);
}
