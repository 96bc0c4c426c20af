#pragma once

#include <cmath>
#include <cstdint>

namespace lorentz {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double X, double Y) : x(X), y(Y) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    double norm() const { return std::hypot(x, y); }
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
// z-component of a x b
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct LatticePoint {
    std::int64_t m{0};
    std::int64_t n{0};
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Unit vector on S^1 stored as principal angle plus cached components.
struct Direction {
    double theta{0.0};  // in [0, 2pi)
    double c{1.0};
    double s{0.0};

    static Direction from_angle(double angle);
    /// Normalizes (x, y); the components are kept as given after normalization.
    static Direction from_vector(double x, double y);

    Vec2 vec() const { return {c, s}; }
    Direction reversed() const { return from_vector(-c, -s); }
    Direction rotated(double angle) const;
};

/// a*b - c*d with the rounding error of both products compensated.
/// Accurate to a few ulps of the result even under heavy cancellation.
double diff_of_products(double a, double b, double c, double d);

/// cross(c, w) for an integer lattice point c, computed without cancellation loss.
double lattice_cross(const LatticePoint& c, const Vec2& w);

/// Floor returning a 64-bit integer.
inline std::int64_t ifloor(double v) { return static_cast<std::int64_t>(std::floor(v)); }

}  // namespace lorentz
