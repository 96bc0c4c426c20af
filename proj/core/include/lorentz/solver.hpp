#pragma once

// Finite-volume solver for the limiting kinetic equation on T^2 x S^1 x R+ x [-1,1]:
//   (d_t + omega . grad_x - d_s) F = int 2 P(2s,h|h') F(t, x, omega_in(h'), 0, h') dh'.
//
// One explicit step is: upwind transport in x, record the trace F(s-cell 0),
// upwind transport in s towards 0, then add the collision gain computed from the
// recorded trace. The discrete kernel is column-stochastic in h', so outflow at
// s = 0 and gain balance exactly, and the discrete equilibrium E_d is an exact
// fixed point of the step.

#include <functional>
#include <string>
#include <vector>

#include "lorentz/initial.hpp"

namespace lorentz::solver {

struct Grids {
    int nx = 32;
    int ny = 32;       // 1 for data that does not depend on x2
    int nomega = 32;
    int nh = 16;
    double ds = 0.1;        // uniform s-cells on [0, s_dense]
    double s_dense = 2.0;
    double growth = 1.5;    // geometric growth of s-cells beyond s_dense
    double s_max = 2000.0;
    double cfl = 0.5;
    int kernel_subcells = 8;  // per h and h' cell, each with a 4x4 Gauss rule
};

/// Precomputed grids, kernel matrix and discrete equilibrium.
class Discretization {
public:
    explicit Discretization(const Grids& g);

    const Grids& grids() const { return g_; }
    int ns() const { return static_cast<int>(s_edges_.size()) - 1; }
    int nh() const { return g_.nh; }
    std::size_t block() const { return static_cast<std::size_t>(ns()) * g_.nh; }  // (s,h) values per (x, omega)
    std::size_t size() const { return static_cast<std::size_t>(g_.nx) * g_.ny * g_.nomega * block(); }

    const std::vector<double>& s_edges() const { return s_edges_; }
    double ds(int i) const { return s_edges_[i + 1] - s_edges_[i]; }
    double dh() const { return 2.0 / g_.nh; }
    double h_center(int j) const { return -1.0 + (j + 0.5) * dh(); }
    double dx() const { return 1.0 / g_.nx; }
    double dy() const { return 1.0 / g_.ny; }
    double domega() const;
    double theta(int k) const { return domega() * k; }
    double x_volume() const { return dx() * dy() * domega(); }

    /// Cell value of the discrete equilibrium (unit mass over the (s,h) grid).
    double E(int i, int j) const { return E_[static_cast<std::size_t>(i) * g_.nh + j]; }
    const std::vector<double>& E() const { return E_; }
    /// M(i,j,l): probability that a particle leaving with impact parameter in cell l
    /// starts its next flight in (s-cell i, h-cell j).
    double M(int i, int j, int l) const { return M_[(static_cast<std::size_t>(i) * g_.nh + j) * g_.nh + l]; }
    /// Equilibrium mass beyond s_max, which the truncated s-grid cannot represent.
    double truncated_tail() const { return truncated_tail_; }

    /// Largest stable time step.
    double max_dt() const;

private:
    friend class Solver;
    Grids g_;
    std::vector<double> s_edges_;
    std::vector<double> M_;   // [i][j][l]
    std::vector<double> Mt_;  // M * dh / (ds_i dh): gain density per unit trace
    std::vector<double> E_;   // [i][j]
    std::vector<int> rot_k_;  // integer part of the angular shift per h' cell
    std::vector<double> rot_a_;
    double truncated_tail_{0.0};
};

/// Flat values in [ix][iy][k][i][j] order.
struct Field {
    std::vector<double> F;
    double t{0.0};
};

enum class Entropy { ZLogZ, Square };
std::string to_string(Entropy e);

struct EntropyReport {
    double t{0.0};
    double H{0.0};
    double D{0.0};
    Entropy kind{Entropy::ZLogZ};
    double excluded_mass{0.0};  // mass in cells with E_d < 1e-12
};

struct DistanceReport {
    double C{0.0};
    double distance{0.0};  // fine-grid L2 distance to C E_d
    double coarse{0.0};    // after block-averaging (4 per x-axis, 4 in omega, 4 in s, 2 in h)
};

struct Diagnostics {
    double t{0.0};
    double mass{0.0};
    EntropyReport zlogz;
    EntropyReport square;
    DistanceReport distance;
    double min_value{0.0};
    double free_flow_violation{0.0};  // max (G - F)_+ when the free-flow field is tracked
    double comparison_ratio{0.0};     // max F / E_d
    double lower_bound{0.0};
};

struct SolveOptions {
    double report_every{1.0};
    bool track_free_flow{false};
    /// Sum D dt over every step for both entropies (costs one extra kernel pass per step).
    bool integrate_dissipation{false};
    std::function<void(const Field&)> on_report;
};

struct SolveResult {
    Field final;
    std::vector<Diagnostics> reports;
    double integrated_D_zlogz{0.0};
    double integrated_D_square{0.0};
    int steps{0};
    double dt{0.0};
};

class Solver {
public:
    explicit Solver(const Grids& g) : d_(g) {}

    const Discretization& disc() const { return d_; }

    /// F0 = f_in(x, omega) E_d(s, h) at cell centres.
    Field init_field(const InitialData& f_in) const;
    Field init_field(const std::function<double(double, double, double)>& f) const;
    /// Field f E_d for an arbitrary factor given at cell centres (size nx*ny*nomega).
    Field modulated(const std::vector<double>& f) const;

    /// One explicit step; free_flow, if given, is advanced with transport only.
    void step(Field& field, double dt, Field* free_flow = nullptr) const;

    double mass(const Field& f) const;
    EntropyReport entropy_report(const Field& f, Entropy kind) const;
    DistanceReport equilibrium_distance(const Field& f) const;
    Diagnostics diagnostics(const Field& f, const Field* free_flow, double lower_bound) const;

    /// L1 norm of the semi-discrete right-hand side at f E_d.
    double local_equilibrium_residual(const std::function<double(double, double, double)>& f) const;

    SolveResult solve(Field field, double t_end, const SolveOptions& opt,
                      const InitialData* f_in = nullptr) const;

    /// Max over (s,h) cells of |E_d - cell average of E| relative to E(0,.) = 1, using the table
    /// values at the cell centres.
    double equilibrium_consistency() const;

private:
    Discretization d_;
    void transport_x(const std::vector<double>& in, std::vector<double>& out, double dt) const;
    void transport_s(std::vector<double>& F, double dt) const;
    void gain(const std::vector<double>& trace, std::vector<double>& F, double dt) const;
    /// Semi-discrete right-hand side.
    void rhs(const std::vector<double>& F, std::vector<double>& out) const;
    double dissipation(const Field& f, Entropy kind) const;
};

struct LowerBound {
    double t{0.0};
    double l2{0.0};          // ||f_in||_2 (int_t^inf int E^2 dh ds)^(1/2)
    double looser{0.0};      // (1/sqrt2) (int_t^inf (int E dh)^2 ds)^(1/2)
    double scaled{0.0};      // t^(3/2) (int_t^inf (int E dh)^2 ds)^(1/2)
    double target{0.0};      // 1/(sqrt3 pi^2)
};

/// Requires t >= 2.
LowerBound free_flow_lower_bound(const InitialData& f_in, double t);

/// ||f||_2 over T^2 x S^1 by a midpoint rule.
double l2_norm(const InitialData& f_in, int n = 128);

}  // namespace lorentz::solver
