#pragma once

// Exact dynamics of a point particle in Z_r = {x : dist(x, Z^2) > r}.
//
// Impact parameter convention: h = cross(omega, n) where n is the unit normal
// pointing out of the obstacle and omega the (outgoing or incoming) velocity.
// With this orientation the billiard transfer map reproduces the limit map
// T_{A,B,Q,sigma} with sigma = (-1)^N exactly in its h-component.

#include <optional>
#include <vector>

#include "lorentz/geometry.hpp"

namespace lorentz::billiard {

struct ParticleState {
    Vec2 position;
    Direction direction;
};

struct CollisionEvent {
    double time{0.0};
    Vec2 point;
    Direction outgoing;
    double impact{0.0};
    LatticePoint center;
};

struct TransferResult {
    double flight{0.0};  // S = 2 r tau
    double impact{0.0};  // h
};

enum class ExitStatus { Hit, NoCollisionChannel, NoCollisionHorizon };

struct ExitResult {
    ExitStatus status{ExitStatus::NoCollisionHorizon};
    double tau{0.0};
    Vec2 point;
    LatticePoint center;
    double impact{0.0};  // h at the hit, from the compensated line offset
    Vec2 normal;         // unit normal at the hit, pointing out of the obstacle
    bool hit() const { return status == ExitStatus::Hit; }
};

struct Options {
    double horizon = 1e6;        // maximal flight time searched
    double grazing_tol = 1e-12;  // |omega . n| below this is a tangential hit
};

/// omega - 2 (omega . n) n
Direction reflect(const Direction& omega, const Vec2& normal);

/// First positive time at which x + t omega meets the boundary of an obstacle.
/// Throws TangentialHit for grazing hits.
ExitResult exit_time(const ParticleState& state, double r, const Options& opt = {});

/// Billiard flow for time t. Flights with no collision continue freely.
ParticleState flow(const ParticleState& state, double r, double t, const Options& opt = {});

enum class SequenceStatus { Complete, NoCollisionChannel, NoCollisionHorizon, TangentialHit };

struct CollisionSequence {
    std::vector<CollisionEvent> events;
    SequenceStatus status{SequenceStatus::Complete};
};

CollisionSequence collision_sequence(const ParticleState& state, double r, int n,
                                     const Options& opt = {});

/// Throws NotOnBoundary if the point is not within 1e-8 of an obstacle circle.
double impact_parameter(const Vec2& point, const Direction& omega, double r);

/// Outgoing state on the origin obstacle whose impact parameter is h'.
ParticleState boundary_point(double h_prime, const Direction& omega, double r);

/// (S, h) of the next collision after leaving the origin obstacle with impact h'.
/// Throws NoCollision or TangentialHit.
TransferResult transfer_map(double h_prime, const Direction& omega, double r,
                            const Options& opt = {});

/// Signed permutation g of the lattice mapping omega into 0 <= omega2 <= omega1.
struct LatticeSymmetry {
    bool swap{false};
    int sx{1};
    int sy{1};

    Vec2 apply(const Vec2& v) const;
    Vec2 invert(const Vec2& v) const;
    LatticePoint invert(const LatticePoint& p) const;
    int det() const { return (swap ? -1 : 1) * sx * sy; }
};

LatticeSymmetry first_octant_symmetry(const Direction& omega);

/// Best p/q with q <= max_q within tol of slope (0 <= slope <= 1), if any.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_slope(double slope, int max_q = 64,
                                                                    double tol = 1e-12);

}  // namespace lorentz::billiard
