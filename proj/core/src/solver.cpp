#include "lorentz/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lorentz/constants.hpp"
#include "lorentz/equilibrium.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz::solver {

namespace {

constexpr std::array<double, 4> kGaussX{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> kGaussW{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};

constexpr double kTinyE = 1e-12;

double phi(Entropy k, double z) {
    if (k == Entropy::Square) return 0.5 * (z - 1.0) * (z - 1.0);
    return z > 0.0 ? z * std::log(z) - z + 1.0 : 1.0;
}

// Bregman gap Phi(b) - Phi(a) - Phi'(a)(b - a) >= 0.
double bregman(Entropy k, double a, double b) {
    if (k == Entropy::Square) return 0.5 * (b - a) * (b - a);
    const double la = std::log(std::max(a, 1e-300));
    const double fb = b > 0.0 ? b * std::log(b) : 0.0;
    return std::max(0.0, fb - b * la - b + a);
}

// Fixed-order sum of per-chunk partials.
template <class F>
double chunked_sum(std::size_t n, F&& body) {
    constexpr std::size_t chunk = 16;
    std::vector<double> part((n + chunk - 1) / chunk, 0.0);
    parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += body(i);
        part[b / chunk] = s;
    });
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

}  // namespace

std::string to_string(Entropy e) { return e == Entropy::ZLogZ ? "zlogz" : "square"; }

double Discretization::domega() const { return kTwoPi / g_.nomega; }

Discretization::Discretization(const Grids& g) : g_(g) {
    if (g.nx < 1 || g.ny < 1 || g.nomega < 4 || g.nh < 2 || !(g.ds > 0.0) || !(g.s_dense > 0.0) ||
        !(g.growth >= 1.0) || !(g.s_max > g.s_dense) || !(g.cfl > 0.0 && g.cfl <= 1.0) || g.kernel_subcells < 1)
        throw InvalidArgument("solver grids: invalid parameters");

    const int n_dense = std::max(1, static_cast<int>(std::lround(g.s_dense / g.ds)));
    s_edges_.push_back(0.0);
    for (int i = 1; i <= n_dense; ++i) s_edges_.push_back(g.s_dense * i / n_dense);
    double step = g.s_dense / n_dense;
    while (s_edges_.back() < g.s_max) {
        step *= g.growth;
        const double next = s_edges_.back() + step;
        // fold a short remainder into the last cell
        s_edges_.push_back(next + 0.5 * step * g.growth >= g.s_max ? g.s_max : next);
    }

    const int ns = this->ns(), nh = g.nh, sub = g.kernel_subcells;
    const double dh = this->dh();

    // Gauss nodes and weights covering each h-cell.
    const int nq = 4 * sub;
    std::vector<double> node(static_cast<std::size_t>(nh) * nq), weight(node.size());
    for (int j = 0; j < nh; ++j)
        for (int a = 0; a < sub; ++a)
            for (int q = 0; q < 4; ++q) {
                const double lo = -1.0 + j * dh + a * dh / sub, w = dh / sub;
                node[static_cast<std::size_t>(j) * nq + a * 4 + q] = lo + 0.5 * w * (1.0 + kGaussX[q]);
                weight[static_cast<std::size_t>(j) * nq + a * 4 + q] = 0.5 * w * kGaussW[q];
            }

    // T(e; j, l) = int_{cell j} int_{cell l} int_{2e}^inf (S - 2e) P(S,h|h') dS dh dh'.
    // The cell average of int_{2s}^inf P dS over s-cell i is (T(e_i) - T(e_{i+1})) / (2 ds_i).
    const std::size_t nn = static_cast<std::size_t>(nh) * nh;
    std::vector<double> T(static_cast<std::size_t>(ns + 1) * nn);
    parallel_for(static_cast<std::size_t>(ns + 1) * nh, [&](std::size_t idx) {
        const std::size_t e = idx / nh;
        const int j = static_cast<int>(idx % nh);
        const double S0 = 2.0 * s_edges_[e];
        for (int l = 0; l < nh; ++l) {
            double acc = 0.0;
            for (int a = 0; a < nq; ++a) {
                const double h = node[static_cast<std::size_t>(j) * nq + a];
                double inner = 0.0;
                for (int b = 0; b < nq; ++b)
                    inner += weight[static_cast<std::size_t>(l) * nq + b] *
                             kernel::p_tail2(S0, h, node[static_cast<std::size_t>(l) * nq + b]);
                acc += weight[static_cast<std::size_t>(j) * nq + a] * inner;
            }
            T[e * nn + static_cast<std::size_t>(j) * nh + l] = acc;
        }
    });
    truncated_tail_ = g.s_max >= 2.0 ? kernel::equilibrium_tail_mass(g.s_max) : 0.0;

    std::vector<double> avg(static_cast<std::size_t>(ns + 1) * nn, 0.0);  // row ns stays 0
    for (int i = 0; i < ns; ++i)
        for (std::size_t jl = 0; jl < nn; ++jl)
            avg[i * nn + jl] = (T[i * nn + jl] - T[(i + 1) * nn + jl]) / (2.0 * ds(i));

    M_.assign(static_cast<std::size_t>(ns) * nn, 0.0);
    for (int l = 0; l < nh; ++l) {
        double col = 0.0;
        for (int j = 0; j < nh; ++j) col += avg[static_cast<std::size_t>(j) * nh + l];
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) {
                const std::size_t jl = static_cast<std::size_t>(j) * nh + l;
                M_[i * nn + jl] = std::max(0.0, avg[i * nn + jl] - avg[(i + 1) * nn + jl]) / col;
            }
        // exact column normalization after clamping
        double sum = 0.0;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) sum += M_[i * nn + static_cast<std::size_t>(j) * nh + l];
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) M_[i * nn + static_cast<std::size_t>(j) * nh + l] /= sum;
    }
    Mt_.resize(M_.size());
    for (int i = 0; i < ns; ++i)
        for (std::size_t jl = 0; jl < nn; ++jl) Mt_[i * nn + jl] = M_[i * nn + jl] / ds(i);

    // Perron vector w of K(j,l) = sum_i M(i,j,l): w_l is the outflow mass in h-cell l at equilibrium.
    std::vector<double> K(nn, 0.0);
    for (int i = 0; i < ns; ++i)
        for (std::size_t jl = 0; jl < nn; ++jl) K[jl] += M_[i * nn + jl];
    std::vector<double> w(nh, 1.0 / nh), wn(nh);
    for (int it = 0; it < 100000; ++it) {
        double diff = 0.0, tot = 0.0;
        for (int j = 0; j < nh; ++j) {
            double s = 0.0;
            for (int l = 0; l < nh; ++l) s += K[static_cast<std::size_t>(j) * nh + l] * w[l];
            wn[j] = s;
            tot += s;
        }
        for (int j = 0; j < nh; ++j) {
            wn[j] /= tot;
            diff = std::max(diff, std::abs(wn[j] - w[j]));
        }
        w.swap(wn);
        if (diff < 1e-16) break;
    }

    E_.assign(static_cast<std::size_t>(ns) * nh, 0.0);
    std::vector<double> acc(nh, 0.0);
    for (int i = ns - 1; i >= 0; --i)
        for (int j = 0; j < nh; ++j) {
            for (int l = 0; l < nh; ++l) acc[j] += M(i, j, l) * w[l] / dh;
            E_[static_cast<std::size_t>(i) * nh + j] = acc[j];
        }
    double mass = 0.0;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nh; ++j) mass += E(i, j) * ds(i) * dh;
    for (double& v : E_) v /= mass;

    // Incoming direction for outgoing angle theta_k and impact parameter h'_l:
    // theta_k - (pi - 2 asin h'_l), in units of the angular step.
    rot_k_.resize(nh);
    rot_a_.resize(nh);
    for (int l = 0; l < nh; ++l) {
        const double pos = -(kPi - 2.0 * std::asin(h_center(l))) / domega();
        const double fl = std::floor(pos);
        rot_k_[l] = static_cast<int>(fl);
        rot_a_[l] = pos - fl;
    }
}

double Discretization::max_dt() const {
    double m = ds(0);
    for (int i = 0; i < ns(); ++i) m = std::min(m, ds(i));
    if (g_.nx > 1) m = std::min(m, dx());
    if (g_.ny > 1) m = std::min(m, dy());
    return g_.cfl * m;
}

Field Solver::init_field(const InitialData& f_in) const {
    return init_field([&](double x1, double x2, double th) { return f_in(x1, x2, th); });
}

Field Solver::init_field(const std::function<double(double, double, double)>& f) const {
    const auto& g = d_.grids();
    std::vector<double> fx(static_cast<std::size_t>(g.nx) * g.ny * g.nomega);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int k = 0; k < g.nomega; ++k) {
                const double v = f((ix + 0.5) * d_.dx(), (iy + 0.5) * d_.dy(), d_.theta(k));
                if (!(v >= 0.0)) throw InvalidArgument("initial data must be nonnegative");
                fx[(static_cast<std::size_t>(ix) * g.ny + iy) * g.nomega + k] = v;
            }
    return modulated(fx);
}

Field Solver::modulated(const std::vector<double>& f) const {
    const std::size_t nb = d_.block();
    if (f.size() * nb != d_.size()) throw InvalidArgument("modulated: factor has the wrong size");
    Field out;
    out.F.resize(d_.size());
    for (std::size_t c = 0; c < f.size(); ++c)
        for (std::size_t q = 0; q < nb; ++q) out.F[c * nb + q] = f[c] * d_.E_[q];
    return out;
}

void Solver::transport_x(const std::vector<double>& in, std::vector<double>& out, double dt) const {
    const auto& g = d_.grids();
    const std::size_t nb = d_.block();
    const int nx = g.nx, ny = g.ny, nw = g.nomega;
    parallel_for(static_cast<std::size_t>(nx) * ny, [&](std::size_t xy) {
        const int ix = static_cast<int>(xy) / ny, iy = static_cast<int>(xy) % ny;
        for (int k = 0; k < nw; ++k) {
            const double c = std::cos(d_.theta(k)), s = std::sin(d_.theta(k));
            const double cx = nx > 1 ? std::abs(c) * dt / d_.dx() : 0.0;
            const double cy = ny > 1 ? std::abs(s) * dt / d_.dy() : 0.0;
            const int jx = (ix + (c > 0.0 ? nx - 1 : 1)) % nx;
            const int jy = (iy + (s > 0.0 ? ny - 1 : 1)) % ny;
            const std::size_t self = ((static_cast<std::size_t>(ix) * ny + iy) * nw + k) * nb;
            const std::size_t ux = ((static_cast<std::size_t>(jx) * ny + iy) * nw + k) * nb;
            const std::size_t uy = ((static_cast<std::size_t>(ix) * ny + jy) * nw + k) * nb;
            for (std::size_t q = 0; q < nb; ++q)
                out[self + q] = (1.0 - cx - cy) * in[self + q] + cx * in[ux + q] + cy * in[uy + q];
        }
    });
}

void Solver::transport_s(std::vector<double>& F, double dt) const {
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh();
    std::vector<double> c(ns);
    for (int i = 0; i < ns; ++i) c[i] = dt / d_.ds(i);
    parallel_for(F.size() / nb, [&](std::size_t blk) {
        double* f = F.data() + blk * nb;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) {
                const double up = i + 1 < ns ? f[(i + 1) * nh + j] : 0.0;
                f[i * nh + j] += c[i] * (up - f[i * nh + j]);
            }
    });
}

void Solver::gain(const std::vector<double>& trace, std::vector<double>& F, double dt) const {
    const auto& g = d_.grids();
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh(), nw = g.nomega;
    parallel_for(F.size() / nb, [&](std::size_t blk) {
        const std::size_t xy = blk / nw;
        const int k = static_cast<int>(blk % nw);
        std::vector<double> R(nh);
        for (int l = 0; l < nh; ++l) {
            const int k0 = ((k + d_.rot_k_[l]) % nw + nw) % nw, k1 = (k0 + 1) % nw;
            const double a = d_.rot_a_[l];
            R[l] = (1.0 - a) * trace[(xy * nw + k0) * nh + l] + a * trace[(xy * nw + k1) * nh + l];
        }
        double* f = F.data() + blk * nb;
        const double* mt = d_.Mt_.data();
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) {
                const double* row = mt + (static_cast<std::size_t>(i) * nh + j) * nh;
                double s = 0.0;
                for (int l = 0; l < nh; ++l) s += row[l] * R[l];
                f[i * nh + j] += dt * s;
            }
    });
}

void Solver::step(Field& field, double dt, Field* free_flow) const {
    const auto& g = d_.grids();
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
    double smin = d_.ds(0);
    for (int i = 0; i < d_.ns(); ++i) smin = std::min(smin, d_.ds(i));
    double courant = 0.0;
    for (int k = 0; k < g.nomega; ++k)
        courant = std::max(courant, (g.nx > 1 ? std::abs(std::cos(d_.theta(k))) / d_.dx() : 0.0) +
                                        (g.ny > 1 ? std::abs(std::sin(d_.theta(k))) / d_.dy() : 0.0));
    if (dt > smin * (1.0 + 1e-12) || dt * courant > 1.0 + 1e-12)
        throw CFLViolation("step: dt = " + std::to_string(dt) + " exceeds the stability limit");
    if (field.F.size() != d_.size()) throw InvalidArgument("step: field has the wrong size");

    const std::size_t nb = d_.block();
    const int nh = d_.nh();
    std::vector<double> next(field.F.size());
    transport_x(field.F, next, dt);
    std::vector<double> trace(field.F.size() / nb * nh);
    for (std::size_t blk = 0; blk < field.F.size() / nb; ++blk)
        std::copy_n(next.begin() + static_cast<std::ptrdiff_t>(blk * nb), nh,
                    trace.begin() + static_cast<std::ptrdiff_t>(blk * nh));
    transport_s(next, dt);
    gain(trace, next, dt);

    double lo = 0.0, hi = 0.0;
    for (double v : next) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo < -1e-12 * std::max(1.0, hi)) throw NegativeDensity("step: negative density " + std::to_string(lo));
    field.F.swap(next);
    field.t += dt;

    if (free_flow) {
        std::vector<double> gnext(free_flow->F.size());
        transport_x(free_flow->F, gnext, dt);
        transport_s(gnext, dt);
        free_flow->F.swap(gnext);
        free_flow->t += dt;
    }
}

void Solver::rhs(const std::vector<double>& F, std::vector<double>& out) const {
    const auto& g = d_.grids();
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh();
    // x-part: transport_x over unit time minus identity
    transport_x(F, out, 1.0);
    for (std::size_t q = 0; q < F.size(); ++q) out[q] -= F[q];
    std::vector<double> trace(F.size() / nb * nh);
    for (std::size_t blk = 0; blk < F.size() / nb; ++blk)
        std::copy_n(F.begin() + static_cast<std::ptrdiff_t>(blk * nb), nh,
                    trace.begin() + static_cast<std::ptrdiff_t>(blk * nh));
    parallel_for(F.size() / nb, [&](std::size_t blk) {
        const double* f = F.data() + blk * nb;
        double* o = out.data() + blk * nb;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) {
                const double up = i + 1 < ns ? f[(i + 1) * nh + j] : 0.0;
                o[i * nh + j] += (up - f[i * nh + j]) / d_.ds(i);
            }
    });
    gain(trace, out, 1.0);
    (void)g;
}

double Solver::mass(const Field& f) const {
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh();
    const double vol = d_.x_volume() * d_.dh();
    return chunked_sum(f.F.size() / nb, [&](std::size_t blk) {
        const double* v = f.F.data() + blk * nb;
        double s = 0.0;
        for (int i = 0; i < ns; ++i) {
            double r = 0.0;
            for (int j = 0; j < nh; ++j) r += v[i * nh + j];
            s += r * d_.ds(i);
        }
        return s * vol;
    });
}

double Solver::dissipation(const Field& f, Entropy kind) const {
    const auto& g = d_.grids();
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh(), nw = g.nomega;
    const double dh = d_.dh();
    std::vector<double> w0(nh);  // outflow weight E_d(0,l) dh
    for (int l = 0; l < nh; ++l) w0[l] = d_.E(0, l) * dh;
    return d_.x_volume() * chunked_sum(f.F.size() / nb, [&](std::size_t blk) {
               const std::size_t xy = blk / nw;
               const int k = static_cast<int>(blk % nw);
               std::vector<double> fp(nh);
               for (int l = 0; l < nh; ++l) {
                   const int k0 = ((k + d_.rot_k_[l]) % nw + nw) % nw, k1 = (k0 + 1) % nw;
                   const double a = d_.rot_a_[l];
                   fp[l] = ((1.0 - a) * f.F[(xy * nw + k0) * nb + l] + a * f.F[(xy * nw + k1) * nb + l]) /
                           d_.E(0, l);
               }
               const double* v = f.F.data() + blk * nb;
               double s = 0.0;
               for (int i = 0; i < ns; ++i)
                   for (int j = 0; j < nh; ++j) {
                       const double e = d_.E(i, j);
                       if (e < kTinyE) continue;
                       const double z = v[i * nh + j] / e;
                       for (int l = 0; l < nh; ++l) s += d_.M(i, j, l) * w0[l] * bregman(kind, z, fp[l]);
                   }
               return s;
           });
}

EntropyReport Solver::entropy_report(const Field& f, Entropy kind) const {
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh();
    const double vol = d_.x_volume() * d_.dh();
    EntropyReport r;
    r.t = f.t;
    r.kind = kind;
    r.H = chunked_sum(f.F.size() / nb, [&](std::size_t blk) {
        const double* v = f.F.data() + blk * nb;
        double s = 0.0;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) {
                const double e = d_.E(i, j);
                if (e < kTinyE) continue;
                s += phi(kind, v[i * nh + j] / e) * e * d_.ds(i);
            }
        return s * vol;
    });
    r.excluded_mass = chunked_sum(f.F.size() / nb, [&](std::size_t blk) {
        const double* v = f.F.data() + blk * nb;
        double s = 0.0;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j)
                if (d_.E(i, j) < kTinyE) s += v[i * nh + j] * d_.ds(i);
        return s * vol;
    });
    r.D = dissipation(f, kind);
    return r;
}

DistanceReport Solver::equilibrium_distance(const Field& f) const {
    const auto& g = d_.grids();
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh(), nw = g.nomega;
    DistanceReport r;
    r.C = mass(f) / kTwoPi;
    const double vol = d_.x_volume() * d_.dh();
    r.distance = std::sqrt(chunked_sum(f.F.size() / nb, [&](std::size_t blk) {
        const double* v = f.F.data() + blk * nb;
        double s = 0.0;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) {
                const double d = v[i * nh + j] - r.C * d_.E(i, j);
                s += d * d * d_.ds(i);
            }
        return s * vol;
    }));

    const int bx = std::min(4, g.nx), by = std::min(4, g.ny), bw = 4, bs = std::min(4, ns), bh = 2;
    std::vector<double> dev(static_cast<std::size_t>(bx) * by * bw * bs * bh, 0.0), bvol(dev.size(), 0.0);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int k = 0; k < nw; ++k) {
                const double* v = f.F.data() + ((static_cast<std::size_t>(ix) * g.ny + iy) * nw + k) * nb;
                const std::size_t outer =
                    ((static_cast<std::size_t>(ix * bx / g.nx) * by + iy * by / g.ny) * bw + k * bw / nw) * bs;
                for (int i = 0; i < ns; ++i)
                    for (int j = 0; j < nh; ++j) {
                        const std::size_t b = (outer + i * bs / ns) * bh + j * bh / nh;
                        const double cv = vol * d_.ds(i);
                        dev[b] += (v[i * nh + j] - r.C * d_.E(i, j)) * cv;
                        bvol[b] += cv;
                    }
            }
    double s = 0.0;
    for (std::size_t b = 0; b < dev.size(); ++b)
        if (bvol[b] > 0.0) s += dev[b] * dev[b] / bvol[b];
    r.coarse = std::sqrt(s);
    return r;
}

Diagnostics Solver::diagnostics(const Field& f, const Field* free_flow, double lower_bound) const {
    Diagnostics d;
    d.t = f.t;
    d.mass = mass(f);
    d.zlogz = entropy_report(f, Entropy::ZLogZ);
    d.square = entropy_report(f, Entropy::Square);
    d.distance = equilibrium_distance(f);
    d.min_value = *std::min_element(f.F.begin(), f.F.end());
    const std::size_t nb = d_.block();
    for (std::size_t q = 0; q < f.F.size(); ++q) {
        const double e = d_.E_[q % nb];
        if (e >= kTinyE) d.comparison_ratio = std::max(d.comparison_ratio, f.F[q] / e);
        if (free_flow) d.free_flow_violation = std::max(d.free_flow_violation, free_flow->F[q] - f.F[q]);
    }
    d.lower_bound = lower_bound;
    return d;
}

double Solver::local_equilibrium_residual(const std::function<double(double, double, double)>& f) const {
    const Field F = init_field(f);
    std::vector<double> out(F.F.size());
    rhs(F.F, out);
    const std::size_t nb = d_.block();
    const int ns = d_.ns(), nh = d_.nh();
    const double vol = d_.x_volume() * d_.dh();
    return chunked_sum(out.size() / nb, [&](std::size_t blk) {
        const double* v = out.data() + blk * nb;
        double s = 0.0;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nh; ++j) s += std::abs(v[i * nh + j]) * d_.ds(i);
        return s * vol;
    });
}

SolveResult Solver::solve(Field field, double t_end, const SolveOptions& opt, const InitialData* f_in) const {
    if (!(opt.report_every > 0.0) || !(t_end >= 0.0)) throw InvalidArgument("solve: invalid time parameters");
    SolveResult res;
    const int per_report = static_cast<int>(std::ceil(opt.report_every / d_.max_dt() - 1e-9));
    res.dt = opt.report_every / per_report;
    Field G;
    if (opt.track_free_flow) G = field;
    auto lower = [&](double t) { return f_in && t >= 2.0 ? free_flow_lower_bound(*f_in, t).l2 : 0.0; };
    auto report = [&] {
        res.reports.push_back(diagnostics(field, opt.track_free_flow ? &G : nullptr, lower(field.t)));
        if (opt.on_report) opt.on_report(field);
    };
    report();
    const int n_reports = static_cast<int>(std::floor(t_end / opt.report_every + 1e-9));
    for (int r = 1; r <= n_reports; ++r) {
        for (int k = 0; k < per_report; ++k) {
            if (opt.integrate_dissipation) {
                res.integrated_D_zlogz += res.dt * dissipation(field, Entropy::ZLogZ);
                res.integrated_D_square += res.dt * dissipation(field, Entropy::Square);
            }
            step(field, res.dt, opt.track_free_flow ? &G : nullptr);
            ++res.steps;
        }
        field.t = r * opt.report_every;
        G.t = field.t;
        report();
    }
    res.final = std::move(field);
    return res;
}

double Solver::equilibrium_consistency() const {
    double worst = 0.0;
    for (int i = 0; i < d_.ns(); ++i) {
        const double s = 0.5 * (d_.s_edges()[i] + d_.s_edges()[i + 1]);
        if (s > 10.0) break;
        for (int j = 0; j < d_.nh(); ++j)
            worst = std::max(worst, std::abs(d_.E(i, j) - kernel::equilibrium_E(s, d_.h_center(j), 1e-9)));
    }
    return worst;
}

double l2_norm(const InitialData& f_in, int n) {
    double s = 0.0;
    const int nt = 16;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < nt; ++k) {
                const double v = f_in((i + 0.5) / n, (j + 0.5) / n, kTwoPi * (k + 0.5) / nt);
                s += v * v;
            }
    return std::sqrt(s * kTwoPi / (static_cast<double>(n) * n * nt));
}

LowerBound free_flow_lower_bound(const InitialData& f_in, double t) {
    if (!(t >= 2.0)) throw InvalidArgument("free_flow_lower_bound: requires t >= 2");
    LowerBound b;
    b.t = t;
    b.l2 = l2_norm(f_in) * std::sqrt(kernel::equilibrium_l2_tail(t));
    const double sq = kernel::equilibrium_h_integral_sq_tail(t);
    b.looser = std::sqrt(0.5 * sq);
    b.scaled = std::pow(t, 1.5) * std::sqrt(sq);
    b.target = 1.0 / (std::sqrt(3.0) * kPiSq);
    return b;
}

}  // namespace lorentz::solver
