#include "lorentz/geometry.hpp"

#include "lorentz/constants.hpp"

namespace lorentz {

Direction Direction::from_angle(double angle) {
    double t = std::fmod(angle, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return {t, std::cos(t), std::sin(t)};
}

Direction Direction::from_vector(double x, double y) {
    const double n = std::hypot(x, y);
    Direction d;
    d.c = x / n;
    d.s = y / n;
    double t = std::atan2(d.s, d.c);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    d.theta = t;
    return d;
}

Direction Direction::rotated(double angle) const {
    const double ca = std::cos(angle), sa = std::sin(angle);
    return from_vector(ca * c - sa * s, sa * c + ca * s);
}

double diff_of_products(double a, double b, double c, double d) {
    const double cd = c * d;
    const double err = std::fma(-c, d, cd);
    const double dop = std::fma(a, b, -cd);
    return dop + err;
}

double lattice_cross(const LatticePoint& c, const Vec2& w) {
    return diff_of_products(static_cast<double>(c.m), w.y, static_cast<double>(c.n), w.x);
}

}  // namespace lorentz
