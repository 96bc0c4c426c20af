#pragma once

// Thin wrappers over Boost.Math quadrature with explicit breakpoints.

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace lorentz::quad {

/// Sorted, deduplicated breakpoints clipped to [a, b], endpoints included.
inline std::vector<double> panels(double a, double b, std::vector<double> pts) {
    pts.push_back(a);
    pts.push_back(b);
    std::vector<double> out;
    for (double p : pts)
        if (p >= a && p <= b && std::isfinite(p)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) < 1e-15; }),
              out.end());
    return out;
}

/// Double-exponential rule per panel; robust to integrable endpoint singularities.
template <class F>
double tanh_sinh(F&& f, double a, double b, const std::vector<double>& breaks, double tol = 1e-12) {
    // The rule object grows its abscissa tables lazily, so nested integrals each
    // need their own instance.
    static thread_local std::vector<std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>> rules;
    static thread_local std::size_t depth = 0;
    if (rules.size() <= depth) rules.push_back(std::make_unique<boost::math::quadrature::tanh_sinh<double>>(10));
    auto& rule = *rules[depth];
    struct Guard {
        std::size_t& d;
        ~Guard() { --d; }
    } guard{++depth};
    double total = 0.0;
    const auto p = panels(a, b, breaks);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i + 1] - p[i] <= 0.0) continue;
        const double lo = p[i], hi = p[i + 1];
        // Abscissae are taken from the complement form; ones that round onto an
        // endpoint are moved one ulp inside.
        auto g = [&](double x, double) {
            if (x <= lo) x = std::nextafter(lo, hi);
            if (x >= hi) x = std::nextafter(hi, lo);
            return f(x);
        };
        total += rule.integrate(g, lo, hi, tol);
    }
    return total;
}

/// Adaptive 31-point Gauss-Kronrod per panel.
template <class F>
double gauss_kronrod(F&& f, double a, double b, const std::vector<double>& breaks, double tol = 1e-13,
                     unsigned depth = 12, double* err_out = nullptr) {
    double total = 0.0, err = 0.0;
    const auto p = panels(a, b, breaks);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i + 1] - p[i] <= 0.0) continue;
        double e = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, p[i], p[i + 1], depth, tol, &e);
        err += e;
    }
    if (err_out) *err_out = err;
    return total;
}

}  // namespace lorentz::quad
