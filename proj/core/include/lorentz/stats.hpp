#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lorentz::stats {

struct ChiSquare {
    double statistic{0.0};
    int dof{0};
    double p_value{1.0};
    int bins{0};              // bins after pooling
    double max_pull{0.0};     // largest |O - E| / sqrt(E)
    std::size_t worst_bin{0};
};

/// Pearson test of counts against cell probabilities for n = sum(observed) draws.
/// Cells with expected count below min_expected are pooled into one cell.
ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& prob,
                     double min_expected = 5.0);

/// Upper tail of the chi-square distribution.
double chi2_sf(double x, int dof);

/// Uniform bins on [lo, hi) plus an overflow cell at index n.
struct Axis {
    int n{1};
    double lo{0.0};
    double hi{1.0};
    /// -1 below lo, n at or above hi.
    int index(double v) const;
    double edge(int i) const { return lo + (hi - lo) * i / n; }
};

/// Relative deviations |w - m| / m over cells with m >= floor.
struct Deviation {
    double max_rel{0.0};
    double l1{0.0};
    int checked{0};
    std::size_t worst{0};
};
Deviation compare_masses(const std::vector<double>& weights, const std::vector<double>& masses, double floor);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MeanVar {
    double mean{0.0};
    double var{0.0};
    std::size_t n{0};
    void add(double v);
    double stderr_mean() const;
};

}  // namespace lorentz::stats
