#include "lorentz/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "lorentz/errors.hpp"

namespace lorentz::stats {

double chi2_sf(double x, int dof) {
    if (dof <= 0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(x, 0.0)));
}

ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& prob, double min_expected) {
    if (observed.size() != prob.size()) throw InvalidArgument("chi_square: size mismatch");
    double n = 0.0;
    for (double o : observed) n += o;
    ChiSquare r;
    double pooled_o = 0.0, pooled_e = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = n * prob[i];
        if (e < min_expected) {
            pooled_o += observed[i];
            pooled_e += e;
            continue;
        }
        const double d = observed[i] - e;
        r.statistic += d * d / e;
        const double pull = std::abs(d) / std::sqrt(e);
        if (pull > r.max_pull) {
            r.max_pull = pull;
            r.worst_bin = i;
        }
        ++cells;
    }
    if (pooled_e > 0.0) {
        const double d = pooled_o - pooled_e;
        r.statistic += d * d / pooled_e;
        ++cells;
    } else if (pooled_o > 0.0) {
        // Draws in cells of zero probability.
        r.statistic = INFINITY;
        ++cells;
    }
    r.bins = cells;
    r.dof = cells - 1;
    r.p_value = std::isfinite(r.statistic) ? chi2_sf(r.statistic, r.dof) : 0.0;
    return r;
}

int Axis::index(double v) const {
    if (v < lo) return -1;
    if (v >= hi) return n;
    return std::min(n - 1, static_cast<int>((v - lo) / (hi - lo) * n));
}

Deviation compare_masses(const std::vector<double>& w, const std::vector<double>& m, double floor) {
    Deviation d;
    for (std::size_t i = 0; i < w.size() && i < m.size(); ++i) {
        d.l1 += std::abs(w[i] - m[i]);
        if (m[i] < floor) continue;
        ++d.checked;
        const double rel = std::abs(w[i] - m[i]) / m[i];
        if (rel > d.max_rel) {
            d.max_rel = rel;
            d.worst = i;
        }
    }
    return d;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return NAN;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void MeanVar::add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    var += d * (v - mean);
}

double MeanVar::stderr_mean() const { return n > 1 ? std::sqrt(var / static_cast<double>(n - 1) / n) : 0.0; }

}  // namespace lorentz::stats
