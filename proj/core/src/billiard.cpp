#include "lorentz/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lorentz/errors.hpp"

namespace lorentz::billiard {

namespace {

void check_radius(double r) {
    if (!(r > 0.0 && r < 0.5)) throw InvalidArgument("obstacle radius must lie in (0, 1/2)");
}

Direction direction_from_components(const Vec2& w) { return Direction::from_vector(w.x, w.y); }

// Ray march in the reduced frame 0 <= w.y <= w.x. Candidate centers in column m
// are the two integers bracketing the line ordinate at abscissa m: a disk further
// away would need a vertical offset of at least 1 - r/w.x > 0.29.
ExitResult march(const Vec2& x0, const Vec2& w, double r, const Options& opt) {
    ExitResult res;
    const double slope = w.y / w.x;
    const double x0w = cross(x0, w);
    const double x0d = dot(x0, w);

    if (auto pq = rational_slope(slope)) {
        const auto [p, q] = *pq;
        const double len = std::hypot(static_cast<double>(p), static_cast<double>(q));
        const double c = x0.x * static_cast<double>(p) - x0.y * static_cast<double>(q);
        const double gap = std::abs(c - std::nearbyint(c)) / len;
        if (gap > r * (1.0 + 1e-12)) {
            res.status = ExitStatus::NoCollisionChannel;
            return res;
        }
    }

    const double t_min = 1e-9 * r;
    double best_t = std::numeric_limits<double>::infinity();
    double best_off = 0.0, best_half = 0.0;
    LatticePoint best_c;
    bool found = false;
    std::int64_t found_col = 0;

    std::int64_t m = ifloor(x0.x - r);
    const double m_last = x0.x + opt.horizon * w.x + 1.0;
    for (; static_cast<double>(m) <= m_last; ++m) {
        const double v = x0.y + (static_cast<double>(m) - x0.x) * slope;
        const std::int64_t n0 = ifloor(v);
        for (std::int64_t n = n0; n <= n0 + 1; ++n) {
            const LatticePoint c{m, n};
            const double off = lattice_cross(c, w) - x0w;
            const double aoff = std::abs(off);
            if (aoff > r) continue;
            const double b = std::fma(static_cast<double>(m), w.x, static_cast<double>(n) * w.y) - x0d;
            const double half = std::sqrt((r - aoff) * (r + aoff));
            const double t1 = b - half;
            if (t1 <= t_min) continue;
            if (t1 < best_t) {
                best_t = t1;
                best_off = off;
                best_half = half;
                best_c = c;
            }
            if (!found) {
                found = true;
                found_col = m;
            }
        }
        if (found && m >= found_col + 2) break;
    }

    if (!found || best_t > opt.horizon) {
        res.status = ExitStatus::NoCollisionHorizon;
        return res;
    }
    if (best_half < opt.grazing_tol * r) throw TangentialHit("grazing collision with |omega.n| below tolerance");

    res.status = ExitStatus::Hit;
    res.tau = best_t;
    res.center = best_c;
    // y - c = -half w + off w_perp with w_perp = (-w.y, w.x)
    res.normal = Vec2{(-best_half * w.x - best_off * w.y) / r, (-best_half * w.y + best_off * w.x) / r};
    res.point = Vec2{static_cast<double>(best_c.m), static_cast<double>(best_c.n)} + res.normal * r;
    res.impact = std::clamp(best_off / r, -1.0, 1.0);
    return res;
}

}  // namespace

Vec2 LatticeSymmetry::apply(const Vec2& v) const {
    Vec2 u = swap ? Vec2{v.y, v.x} : v;
    return {sx * u.x, sy * u.y};
}

Vec2 LatticeSymmetry::invert(const Vec2& v) const {
    Vec2 u{sx * v.x, sy * v.y};
    return swap ? Vec2{u.y, u.x} : u;
}

LatticePoint LatticeSymmetry::invert(const LatticePoint& p) const {
    LatticePoint u{sx * p.m, sy * p.n};
    return swap ? LatticePoint{u.n, u.m} : u;
}

LatticeSymmetry first_octant_symmetry(const Direction& omega) {
    LatticeSymmetry g;
    const double ax = std::abs(omega.c), ay = std::abs(omega.s);
    g.swap = ay > ax;
    const double first = g.swap ? omega.s : omega.c;
    const double second = g.swap ? omega.c : omega.s;
    g.sx = std::signbit(first) ? -1 : 1;
    g.sy = std::signbit(second) ? -1 : 1;
    return g;
}

std::optional<std::pair<std::int64_t, std::int64_t>> rational_slope(double slope, int max_q, double tol) {
    for (std::int64_t q = 1; q <= max_q; ++q) {
        const double pq = slope * static_cast<double>(q);
        const std::int64_t p = std::llround(pq);
        if (std::abs(slope - static_cast<double>(p) / static_cast<double>(q)) <= tol) return std::pair{p, q};
    }
    return std::nullopt;
}

Direction reflect(const Direction& omega, const Vec2& normal) {
    const double wn = omega.c * normal.x + omega.s * normal.y;
    return Direction::from_vector(omega.c - 2.0 * wn * normal.x, omega.s - 2.0 * wn * normal.y);
}

ExitResult exit_time(const ParticleState& state, double r, const Options& opt) {
    check_radius(r);
    const LatticeSymmetry g = first_octant_symmetry(state.direction);
    const Vec2 w = g.apply(state.direction.vec());
    const Vec2 x0 = g.apply(state.position);
    ExitResult res = march(x0, w, r, opt);
    if (res.hit()) {
        res.point = g.invert(res.point);
        res.normal = g.invert(res.normal);
        res.center = g.invert(res.center);
        res.impact *= g.det();
    }
    return res;
}

ParticleState flow(const ParticleState& state, double r, double t, const Options& opt) {
    ParticleState s = state;
    double remaining = t;
    while (remaining > 0.0) {
        const ExitResult ex = exit_time(s, r, opt);
        if (!ex.hit() || ex.tau > remaining) {
            s.position = s.position + s.direction.vec() * remaining;
            break;
        }
        s.position = ex.point;
        s.direction = reflect(s.direction, ex.normal);
        remaining -= ex.tau;
    }
    return s;
}

CollisionSequence collision_sequence(const ParticleState& state, double r, int n, const Options& opt) {
    if (n < 1) throw InvalidArgument("collision count must be >= 1");
    CollisionSequence seq;
    seq.events.reserve(static_cast<std::size_t>(n));
    ParticleState s = state;
    double t = 0.0;
    for (int j = 0; j < n; ++j) {
        ExitResult ex;
        try {
            ex = exit_time(s, r, opt);
        } catch (const TangentialHit&) {
            seq.status = SequenceStatus::TangentialHit;
            return seq;
        }
        if (!ex.hit()) {
            seq.status = ex.status == ExitStatus::NoCollisionChannel ? SequenceStatus::NoCollisionChannel
                                                                     : SequenceStatus::NoCollisionHorizon;
            return seq;
        }
        t += ex.tau;
        s.position = ex.point;
        s.direction = reflect(s.direction, ex.normal);
        seq.events.push_back({t, ex.point, s.direction, ex.impact, ex.center});
    }
    return seq;
}

double impact_parameter(const Vec2& point, const Direction& omega, double r) {
    check_radius(r);
    const Vec2 c{std::nearbyint(point.x), std::nearbyint(point.y)};
    const Vec2 d = point - c;
    const double dist = d.norm();
    if (std::abs(dist - r) > 1e-8) throw NotOnBoundary("point is not on an obstacle boundary");
    const Vec2 n = d * (1.0 / dist);
    return std::clamp(cross(omega.vec(), n), -1.0, 1.0);
}

ParticleState boundary_point(double h_prime, const Direction& omega, double r) {
    check_radius(r);
    const double h = std::clamp(h_prime, -1.0, 1.0);
    const double ch = std::sqrt((1.0 - h) * (1.0 + h));
    const Vec2 n{ch * omega.c - h * omega.s, h * omega.c + ch * omega.s};
    return {n * r, omega};
}

TransferResult transfer_map(double h_prime, const Direction& omega, double r, const Options& opt) {
    check_radius(r);
    if (!(std::abs(h_prime) <= 1.0)) throw InvalidArgument("impact parameter must lie in [-1, 1]");
    const LatticeSymmetry g = first_octant_symmetry(omega);
    const Direction w = direction_from_components(g.apply(omega.vec()));
    const double hr = g.det() * h_prime;
    const ExitResult ex = exit_time(boundary_point(hr, w, r), r, opt);
    if (!ex.hit()) {
        const bool horizon = ex.status == ExitStatus::NoCollisionHorizon;
        throw NoCollision(horizon ? "no collision within horizon" : "clear rational channel", horizon);
    }
    return {2.0 * r * ex.tau, g.det() * ex.impact};
}

}  // namespace lorentz::billiard
