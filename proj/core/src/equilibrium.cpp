#include "lorentz/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lorentz/constants.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/quadrature.hpp"

namespace lorentz::kernel {

namespace {

// h-values where a component of canonical(h, h') crosses 1/s - 1, i.e. where
// 2s meets a breakpoint 2/(1+a) or 2/(1+b).
void add_kinks(std::vector<double>& v, double s) {
    if (s > 0.5) {
        const double c = 1.0 / s - 1.0;
        v.push_back(c);
        v.push_back(-c);
    }
}

std::vector<double> inner_breaks(double h, double s0, double s1 = 0.0) {
    std::vector<double> v{h, -h};
    add_kinks(v, s0);
    add_kinks(v, s1);
    return v;
}

std::vector<double> outer_breaks(double s0, double s1 = 0.0) {
    std::vector<double> v{0.0};
    add_kinks(v, s0);
    add_kinks(v, s1);
    return v;
}

void require_series(double s) {
    if (!(s >= 2.0)) throw InvalidArgument("series expansion of the equilibrium tail requires s >= 2");
}

}  // namespace

double equilibrium_E(double s, double h, double tol) {
    if (s < 0.0 || std::abs(h) > 1.0) throw InvalidArgument("equilibrium_E: need s >= 0 and |h| <= 1");
    auto f = [&](double hp) { return p_tail(2.0 * s, h, hp); };
    return quad::tanh_sinh(f, -1.0, 1.0, inner_breaks(h, s), tol);
}

double equilibrium_dE(double s, double h, double tol) {
    auto f = [&](double hp) { return 2.0 * p_simple(2.0 * s, h, hp); };
    return quad::tanh_sinh(f, -1.0, 1.0, inner_breaks(h, s), tol);
}

double equilibrium_h_integral(double s, double tol) {
    auto f = [&](double h) { return equilibrium_E(s, h, tol); };
    return quad::tanh_sinh(f, -1.0, 1.0, outer_breaks(s), tol);
}

double equilibrium_h_integral_series(double s) {
    require_series(s);
    double sum = 0.0, pw = 1.0 / s;
    for (int k = 1; k < 200; ++k) {
        pw /= s;  // s^-(k+1)
        const double kk = k;
        const double term = (1.0 - std::ldexp(1.0, -k)) * 2.0 * pw / (kk * (kk + 1) * (kk + 1) * (kk + 2));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return k12OverPiSq * sum;
}

double equilibrium_tail_mass(double s) {
    require_series(s);
    double sum = 0.0, pw = 1.0;
    for (int k = 1; k < 200; ++k) {
        pw /= s;  // s^-k
        const double kk = k;
        const double term =
            (1.0 - std::ldexp(1.0, -k)) * 2.0 * pw / (kk * kk * (kk + 1) * (kk + 1) * (kk + 2));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return k12OverPiSq * sum;
}

double equilibrium_bin_mass(double s0, double s1, double h0, double h1, double tol) {
    if (!std::isfinite(s1)) {
        if (h0 <= -1.0 && h1 >= 1.0) return equilibrium_tail_mass(s0);
        s1 = std::numeric_limits<double>::infinity();
    }
    const bool open = !std::isfinite(s1);
    auto inner = [&](double h) {
        auto f = [&](double hp) {
            const double hi = open ? 0.0 : p_tail2(2.0 * s1, h, hp);
            return 0.5 * (p_tail2(2.0 * s0, h, hp) - hi);
        };
        return quad::tanh_sinh(f, -1.0, 1.0, inner_breaks(h, s0, open ? 0.0 : s1), tol);
    };
    return quad::tanh_sinh(inner, h0, h1, outer_breaks(s0, open ? 0.0 : s1), tol);
}

double equilibrium_total_mass(double tol) {
    return equilibrium_bin_mass(0.0, 2.0, -1.0, 1.0, tol) + equilibrium_tail_mass(2.0);
}

double equilibrium_l2_tail(double t) {
    // s = t/u maps [t, inf) onto (0, 1].
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double s = t / u;
        auto g = [&](double h) {
            const double e = equilibrium_E(s, h, 1e-10);
            return e * e;
        };
        return quad::tanh_sinh(g, -1.0, 1.0, outer_breaks(s), 1e-10) * t / (u * u);
    };
    return quad::gauss_kronrod(f, 0.0, 1.0, {}, 1e-9, 8);
}

double equilibrium_h_integral_sq_tail(double t) {
    require_series(t);
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double e = equilibrium_h_integral_series(t / u);
        return e * e * t / (u * u);
    };
    return quad::gauss_kronrod(f, 0.0, 1.0, {}, 1e-14);
}

EquilibriumTable EquilibriumTable::build(const TableSpec& spec) {
    if (spec.n_dense < 2 || spec.n_h < 2 || spec.s_max <= spec.s_dense || spec.n_log < 1)
        throw InvalidArgument("EquilibriumTable: invalid grid specification");
    EquilibriumTable t;
    for (int i = 0; i < spec.n_dense; ++i) t.s_.push_back(spec.s_dense * i / (spec.n_dense - 1));
    const double ratio = std::log(spec.s_max / spec.s_dense) / spec.n_log;
    for (int i = 1; i <= spec.n_log; ++i) t.s_.push_back(spec.s_dense * std::exp(ratio * i));
    t.s_.back() = spec.s_max;
    for (int j = 0; j < spec.n_h; ++j) t.h_.push_back(-1.0 + 2.0 * j / (spec.n_h - 1));
    t.v_.assign(t.s_.size() * t.h_.size(), 0.0);
    const std::size_t nh = t.h_.size();
    parallel_for(t.s_.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < nh; ++j) t.v_[i * nh + j] = equilibrium_E(t.s_[i], t.h_[j]);
    });
    t.tail_constant_ = kOneOverPiSq;
    return t;
}

double EquilibriumTable::operator()(double s, double h) const {
    if (s < 0.0 || s > s_.back()) return 0.0;
    h = std::clamp(h, -1.0, 1.0);
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = it == s_.end() ? s_.size() - 2 : static_cast<std::size_t>(it - s_.begin()) - 1;
    i = std::min(i, s_.size() - 2);
    const double hs = (h_.size() - 1) * (h + 1.0) / 2.0;
    std::size_t j = std::min(static_cast<std::size_t>(hs), h_.size() - 2);
    const double ws = (s - s_[i]) / (s_[i + 1] - s_[i]);
    const double wh = hs - j;
    const std::size_t nh = h_.size();
    const double* r0 = &v_[i * nh];
    const double* r1 = &v_[(i + 1) * nh];
    return (1 - ws) * ((1 - wh) * r0[j] + wh * r0[j + 1]) + ws * ((1 - wh) * r1[j] + wh * r1[j + 1]);
}

}  // namespace lorentz::kernel

namespace lorentz::kernel {

EquilibriumSampler::EquilibriumSampler(const EquilibriumTable& table) : table_(&table) {
    const auto& s = table.s_grid();
    const std::size_t n = s.size() - 1;
    std::vector<double> mass(n + 1);
    parallel_for(n, [&](std::size_t i) { mass[i] = equilibrium_bin_mass(s[i], s[i + 1], -1.0, 1.0, 1e-10); });
    mass[n] = equilibrium_tail_mass(s.back());
    cdf_.resize(n + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) cdf_[i] = (acc += mass[i]);
    for (double& c : cdf_) c /= acc;
    const auto& h = table.h_grid();
    row_mass_.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double m = 0.0;
        for (std::size_t j = 0; j + 1 < h.size(); ++j) m += 0.5 * (table.at(i, j) + table.at(i, j + 1)) * (h[j + 1] - h[j]);
        row_mass_[i] = m;
    }
}

namespace {
// Inverse CDF of the density proportional to (1-x) a + x b on [0, 1].
double linear_inverse(double a, double b, double u) {
    if (std::abs(b - a) < 1e-12 * (a + b)) return u;
    const double disc = a * a + (b * b - a * a) * u;
    return (std::sqrt(std::max(disc, 0.0)) - a) / (b - a);
}
}  // namespace

double EquilibriumSampler::sample_h(double, std::size_t i, double ws, Rng& rng) const {
    const auto& h = table_->h_grid();
    const std::size_t nh = h.size();
    std::vector<double> row(nh);
    for (std::size_t j = 0; j < nh; ++j) row[j] = (1 - ws) * table_->at(i, j) + ws * table_->at(i + 1, j);
    std::vector<double> cum(nh - 1);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < nh; ++j) cum[j] = (acc += 0.5 * (row[j] + row[j + 1]));
    const double u = uniform01(rng) * acc;
    const std::size_t j = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), nh - 2);
    const double x = linear_inverse(row[j], row[j + 1], uniform01(rng));
    return h[j] + x * (h[j + 1] - h[j]);
}

std::pair<double, double> EquilibriumSampler::operator()(Rng& rng) const {
    const auto& s = table_->s_grid();
    const std::size_t n = s.size() - 1;
    const double u = uniform01(rng);
    const std::size_t k = std::min<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin(), n);
    if (k == n) {
        // Tail: solve tail_mass(s) = v * tail_mass(s_max) by bisection in log s.
        const double target = uniform01(rng) * equilibrium_tail_mass(s.back());
        double lo = std::log(s.back()), hi = lo + 60.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (equilibrium_tail_mass(std::exp(mid)) > target ? lo : hi) = mid;
        }
        const double sv = std::exp(0.5 * (lo + hi));
        return {sv, sample_h(sv, n - 1, 1.0, rng)};
    }
    const double x = linear_inverse(row_mass_[k], row_mass_[k + 1], uniform01(rng));
    const double sv = s[k] + x * (s[k + 1] - s[k]);
    return {sv, sample_h(sv, k, x, rng)};
}

}  // namespace lorentz::kernel
