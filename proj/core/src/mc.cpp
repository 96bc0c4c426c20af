#include "lorentz/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "lorentz/constants.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/quadrature.hpp"

namespace lorentz::mc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LogGrid {
    std::vector<double> r;
    std::vector<double> w;  // trapezoid weights in ln r, summing to 1
    double length{0.0};
};

LogGrid log_grid(double r_min, double r_max, double points_per_decade) {
    if (!(r_min > 0.0 && r_max > r_min)) throw InvalidArgument("log grid: need 0 < r_min < r_max");
    LogGrid g;
    g.length = std::log(r_max / r_min);
    const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(points_per_decade * g.length / std::log(10.0)) + 1));
    g.r.resize(n);
    g.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.r[i] = r_min * std::exp(g.length * static_cast<double>(i) / static_cast<double>(n - 1));
        g.w[i] = (i == 0 || i + 1 == n ? 0.5 : 1.0) / static_cast<double>(n - 1);
    }
    return g;
}

Direction random_direction(Rng& rng) { return Direction::from_angle(kTwoPi * uniform01(rng)); }

// Rejection sample of (x1, x2, theta) from f_in.
void sample_initial(const InitialData& f, Rng& rng, double& x1, double& x2, double& th) {
    const double bound = f.bound();
    if (!(bound > 0.0)) throw InvalidArgument("initial density must be positive somewhere");
    for (;;) {
        x1 = uniform01(rng);
        x2 = uniform01(rng);
        th = kTwoPi * uniform01(rng);
        if (uniform01(rng) * bound < f(x1, x2, th)) return;
    }
}

double wrap01(double v) {
    v -= std::floor(v);
    return v >= 1.0 ? 0.0 : v;
}

std::size_t xw_index(double x1, double x2, double th, int nx, int nt) {
    const int i = std::min(nx - 1, static_cast<int>(wrap01(x1) * nx));
    const int j = std::min(nx - 1, static_cast<int>(wrap01(x2) * nx));
    const int k = std::min(nt - 1, static_cast<int>(wrap01(th / kTwoPi) * nt));
    return (static_cast<std::size_t>(i) * nx + j) * nt + k;
}

std::size_t sh_index(const SHBins& b, double s, double h) {
    const auto it = std::upper_bound(b.s_edges.begin(), b.s_edges.end(), s);
    std::size_t is = static_cast<std::size_t>(it - b.s_edges.begin());
    is = is == 0 ? 0 : std::min(is - 1, b.s_edges.size() - 2);
    const int ih = std::clamp(static_cast<int>((h + 1.0) * 0.5 * b.nh), 0, b.nh - 1);
    return is * b.nh + ih;
}

}  // namespace

std::size_t KernelBins::index(double S, double h) const {
    if (!(S >= 0.0 && S < S_max)) return static_cast<std::size_t>(nS * nh);
    const int i = std::min(nS - 1, static_cast<int>(S / S_max * nS));
    const int j = std::clamp(static_cast<int>((h + 1.0) * 0.5 * nh), 0, nh - 1);
    return static_cast<std::size_t>(i * nh + j);
}

std::vector<double> kernel_bin_masses(const KernelBins& b, double hp) {
    std::vector<double> m(b.size());
    parallel_for(static_cast<std::size_t>(b.nS * b.nh), [&](std::size_t k) {
        const int i = static_cast<int>(k) / b.nh, j = static_cast<int>(k) % b.nh;
        const double S0 = b.S_max * i / b.nS, S1 = b.S_max * (i + 1) / b.nS;
        const double h0 = -1.0 + 2.0 * j / b.nh, h1 = -1.0 + 2.0 * (j + 1) / b.nh;
        m[k] = kernel::p_bin_mass(S0, S1, h0, h1, hp);
    });
    m.back() = kernel::p_bin_mass(b.S_max, kInf, -1.0, 1.0, hp);
    return m;
}

arithmetic::ObstacleConfig reduced_params(const Direction& omega, double r) {
    const auto g = billiard::first_octant_symmetry(omega);
    const Vec2 w = g.apply(omega.vec());
    return arithmetic::obstacle_params_cf(Direction::from_vector(w.x, w.y), r);
}

kernel::Transfer limit_transfer_at(double hp, const Direction& omega, double r) {
    const auto g = billiard::first_octant_symmetry(omega);
    const double det = g.det();
    const auto cfg = reduced_params(omega, r);
    const auto t = kernel::limit_transfer(cfg, det * hp);
    return {t.S, det * t.h};
}

namespace {

CesaroEstimate finish_estimate(CesaroEstimate est, const std::vector<long>& idx, const std::vector<double>& w,
                               double floor) {
    est.weights.assign(est.bins.size(), 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0) {
            ++est.excluded;
            continue;
        }
        est.weights[static_cast<std::size_t>(idx[i])] += w[i];
    }
    est.total = 0.0;
    for (double v : est.weights) est.total += v;
    if (est.total > 0.0)
        for (double& v : est.weights) v /= est.total;
    est.samples = static_cast<long>(idx.size());
    est.expected = kernel_bin_masses(est.bins, est.h_prime);
    est.deviation = stats::compare_masses(est.weights, est.expected, floor);
    return est;
}

long transfer_bin(const KernelBins& bins, double hp, const Direction& omega, double r) {
    billiard::Options opt;
    opt.horizon = (bins.S_max + 0.5) / (2.0 * r);
    try {
        const auto t = billiard::transfer_map(hp, omega, r, opt);
        return static_cast<long>(bins.index(t.flight, t.impact));
    } catch (const NoCollision&) {
        return static_cast<long>(bins.size() - 1);
    } catch (const LorentzError&) {
        return -1;
    }
}

}  // namespace

CesaroEstimate cesaro_kernel_estimate(double hp, const Direction& omega, double eps, const CesaroOptions& opt) {
    const LogGrid g = log_grid(eps, opt.r_max, opt.points_per_decade);
    CesaroEstimate est;
    est.h_prime = hp;
    est.eps = eps;
    est.r_min = eps;
    est.r_max = opt.r_max;
    est.normalization = g.length;
    est.bins = opt.bins;
    std::vector<long> idx(g.r.size());
    parallel_chunks(g.r.size(), 64, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) idx[i] = transfer_bin(opt.bins, hp, omega, g.r[i]);
    });
    return finish_estimate(std::move(est), idx, g.w, opt.mass_floor);
}

CesaroEstimate direction_averaged_kernel_estimate(double hp, double r, long n, std::uint64_t seed,
                                                  const KernelBins& bins, double floor) {
    CesaroEstimate est;
    est.h_prime = hp;
    est.eps = r;
    est.r_min = est.r_max = r;
    est.bins = bins;
    std::vector<long> idx(static_cast<std::size_t>(n));
    std::vector<double> w(idx.size(), 1.0 / static_cast<double>(n));
    parallel_chunks(idx.size(), 256, [&](std::size_t b, std::size_t e) {
        Rng rng = make_stream(seed, b);
        for (std::size_t i = b; i < e; ++i) idx[i] = transfer_bin(bins, hp, random_direction(rng), r);
    });
    return finish_estimate(std::move(est), idx, w, floor);
}

std::size_t ConfigBins::index(double A, double B, double Q, int sigma) const {
    auto cell = [&](double v) { return std::clamp(static_cast<int>(v * n), 0, n - 1); };
    return static_cast<std::size_t>(((sigma > 0 ? 1 : 0) * n + cell(A)) * n + cell(B)) * n + cell(Q);
}

std::vector<double> mu_bin_masses(const ConfigBins& b) {
    const int n = b.n;
    std::vector<double> half(static_cast<std::size_t>(n * n * n));
    parallel_for(half.size(), [&](std::size_t k) {
        const int iA = static_cast<int>(k) / (n * n), iB = (static_cast<int>(k) / n) % n, iQ = static_cast<int>(k) % n;
        const double A0 = double(iA) / n, A1 = double(iA + 1) / n;
        const double B0 = double(iB) / n, B1 = double(iB + 1) / n;
        const double Q0 = double(iQ) / n, Q1 = double(iQ + 1) / n;
        auto qlen = [&](double A, double B) {
            const double top = std::min(Q1, 1.0 / (2.0 - A - B));
            return std::max(0.0, top - Q0);
        };
        auto inner = [&](double A) {
            const double hi = std::min(B1, 1.0 - A);
            if (hi <= B0) return 0.0;
            std::vector<double> br;
            if (Q0 > 0.0) br.push_back(2.0 - A - 1.0 / Q0);
            br.push_back(2.0 - A - 1.0 / Q1);
            return quad::gauss_kronrod([&](double B) { return qlen(A, B); }, B0, hi, br, 1e-12) / (1.0 - A);
        };
        std::vector<double> br{1.0 - B0, 1.0 - B1};
        for (double Q : {Q0, Q1})
            if (Q > 0.0)
                for (double B : {B0, B1}) br.push_back(2.0 - 1.0 / Q - B);
        half[k] = k6OverPiSq * quad::gauss_kronrod(inner, A0, A1, br, 1e-11);
    });
    std::vector<double> m(b.size());
    for (int s = 0; s < 2; ++s)
        for (std::size_t k = 0; k < half.size(); ++k) m[s * half.size() + k] = half[k];
    return m;
}

ConfigDistribution cesaro_config_distribution(const Direction& omega, double eps, double ppd, double r_max) {
    const LogGrid g = log_grid(eps, r_max, ppd);
    ConfigDistribution out;
    out.eps = eps;
    struct Item {
        long bin{-1};
        int sigma{0};
        double A{0.0}, Q{0.0};
    };
    std::vector<Item> items(g.r.size());
    parallel_chunks(g.r.size(), 1024, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            try {
                const auto c = reduced_params(omega, g.r[i]);
                items[i] = {static_cast<long>(out.bins.index(c.A, c.B, c.Q, c.sigma)), c.sigma, c.A, c.Q};
            } catch (const LorentzError&) {
            }
        }
    });
    out.weights.assign(out.bins.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].bin < 0) {
            ++out.excluded;
            continue;
        }
        const double w = g.w[i];
        out.weights[static_cast<std::size_t>(items[i].bin)] += w;
        out.mean_sigma += w * items[i].sigma;
        out.mean_sigma_A += w * items[i].sigma * items[i].A;
        out.mean_sigma_Q += w * items[i].sigma * items[i].Q;
        total += w;
    }
    for (double& v : out.weights) v /= total;
    out.mean_sigma /= total;
    out.mean_sigma_A /= total;
    out.mean_sigma_Q /= total;
    out.samples = static_cast<long>(items.size());
    out.expected = mu_bin_masses(out.bins);
    std::vector<double> counts(out.weights.size());
    const double n_used = static_cast<double>(out.samples - out.excluded);
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = out.weights[i] * n_used;
    out.chi2 = stats::chi_square(counts, out.expected);
    out.deviation = stats::compare_masses(out.weights, out.expected, 1e-3);
    return out;
}

AsymptoticCheck asymptotic_transfer_check(const Direction& omega, const std::vector<double>& r_list, double hp) {
    AsymptoticCheck out;
    std::vector<double> xs, ys;
    const auto g = billiard::first_octant_symmetry(omega);
    for (double r : r_list) {
        AsymptoticRow row;
        row.r = r;
        try {
            const auto cfg = reduced_params(omega, r);
            const double sh = cfg.sigma * g.det() * hp;
            const double gap = std::min(std::abs(sh - (1.0 - 2.0 * cfg.A)), std::abs(sh - (-1.0 + 2.0 * cfg.B)));
            const auto lim = limit_transfer_at(hp, omega, r);
            row.S_limit = lim.S;
            row.h_limit = lim.h;
            const auto b = billiard::transfer_map(hp, omega, r);
            row.S_billiard = b.flight;
            row.h_billiard = b.impact;
            row.err_S = std::abs(b.flight - lim.S);
            row.err_h = std::abs(b.impact - lim.h);
            if (gap < 1e-3) {
                row.excluded = true;
                row.reason = "case boundary within 1e-3 of sigma h'";
            }
        } catch (const std::exception& e) {
            row.excluded = true;
            row.reason = e.what();
        }
        if (!row.excluded) {
            out.max_err_h = std::max(out.max_err_h, row.err_h);
            if (row.err_S > 0.0) {
                xs.push_back(r);
                ys.push_back(row.err_S);
            }
            ++out.used;
        }
        out.rows.push_back(row);
    }
    out.slope = stats::loglog_slope(xs, ys);
    return out;
}

MarkovState markov_step(const MarkovState& st, Rng& rng) {
    MarkovState n = st;
    const Vec2 w = st.omega.vec();
    n.x = Vec2{wrap01(st.x.x + st.s * w.x), wrap01(st.x.y + st.s * w.y)};
    n.t = st.t + st.s;
    const double h = std::clamp(st.h, -1.0, 1.0);
    n.omega = st.omega.rotated(kPi - 2.0 * std::asin(h));
    const auto tr = kernel::limit_transfer(kernel::sample_mu(rng), h);
    n.s = 0.5 * tr.S;
    n.h = std::clamp(tr.h, -1.0, 1.0);
    return n;
}

SHBins SHBins::standard() {
    SHBins b;
    for (int i = 0; i <= 10; ++i) b.s_edges.push_back(0.1 * i);
    for (double e : {1.25, 1.5, 2.0, 3.0, 5.0, 10.0}) b.s_edges.push_back(e);
    b.s_edges.push_back(kInf);
    b.nh = 10;
    return b;
}

std::vector<double> equilibrium_bin_masses(const SHBins& b) {
    std::vector<double> m(b.size());
    parallel_for(m.size(), [&](std::size_t k) {
        const std::size_t is = k / b.nh;
        const int ih = static_cast<int>(k % b.nh);
        m[k] = kernel::equilibrium_bin_mass(b.s_edges[is], b.s_edges[is + 1], -1.0 + 2.0 * ih / b.nh,
                                            -1.0 + 2.0 * (ih + 1) / b.nh, 1e-10);
    });
    return m;
}

StationaryTest markov_stationary_test(long steps, double t_obs, std::uint64_t seed,
                                      const kernel::EquilibriumTable& table, const SHBins& bins) {
    if (!(t_obs > 0.0) || steps < 1) throw InvalidArgument("markov_stationary_test: need t_obs > 0 and steps >= 1");
    const kernel::EquilibriumSampler sampler(table);
    // a replica takes about t_obs / E[s] = 2 t_obs steps
    const std::size_t n = static_cast<std::size_t>(std::max(1.0, std::floor(steps / (2.0 * t_obs))));
    std::vector<std::size_t> cell(n);
    std::vector<long> nsteps(n);
    std::vector<double> ssum(n);
    parallel_chunks(n, 1024, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            Rng rng = make_stream(seed, p);
            MarkovState st;
            st.x = Vec2{uniform01(rng), uniform01(rng)};
            st.omega = random_direction(rng);
            std::tie(st.s, st.h) = sampler(rng);
            long k = 0;
            double sum = 0.0;
            while (st.t + st.s <= t_obs) {
                st = markov_step(st, rng);
                ++k;
                sum += st.s;
            }
            cell[p] = sh_index(bins, st.t + st.s - t_obs, st.h);
            nsteps[p] = k;
            ssum[p] = sum;
        }
    });
    StationaryTest out;
    out.t_obs = t_obs;
    out.counts.assign(bins.size(), 0.0);
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        out.counts[cell[p]] += 1.0;
        out.steps += nsteps[p];
        total += ssum[p];
    }
    out.samples = static_cast<long>(n);
    out.mean_flight = out.steps > 0 ? total / static_cast<double>(out.steps) : 0.0;
    out.expected = equilibrium_bin_masses(bins);
    out.chi2 = stats::chi_square(out.counts, out.expected);
    return out;
}

StationaryTest markov_time_sampled_test(long steps, double spacing, std::uint64_t seed, const SHBins& bins) {
    StationaryTest out;
    Rng rng = make_stream(seed, 0);
    MarkovState st;
    st.x = Vec2{uniform01(rng), uniform01(rng)};
    st.omega = random_direction(rng);
    {
        const auto tr = kernel::sample_P(2.0 * uniform01(rng) - 1.0, rng);
        st.s = 0.5 * tr.S;
        st.h = tr.h;
    }
    for (int i = 0; i < 1000; ++i) st = markov_step(st, rng);
    out.counts.assign(bins.size(), 0.0);
    stats::MeanVar flight;
    double next = st.t + spacing * (0.5 + uniform01(rng));
    for (long k = 0; k < steps; ++k) {
        const double end = st.t + st.s;
        while (next < end) {
            out.counts[sh_index(bins, end - next, st.h)] += 1.0;
            ++out.samples;
            next += spacing * (0.5 + uniform01(rng));
        }
        st = markov_step(st, rng);
        flight.add(st.s);
    }
    out.steps = steps;
    out.mean_flight = flight.mean;
    out.mean_flight_stderr = flight.stderr_mean();
    out.expected = equilibrium_bin_masses(bins);
    out.chi2 = stats::chi_square(out.counts, out.expected);
    return out;
}

std::vector<Snapshot> markov_ensemble(const InitialData& f_in, long n_particles, const std::vector<double>& times,
                                      std::uint64_t seed, const kernel::EquilibriumTable& table, int nx,
                                      int ntheta) {
    const kernel::EquilibriumSampler sampler(table);
    const SHBins shb = SHBins::standard();
    const std::size_t nxw = static_cast<std::size_t>(nx) * nx * ntheta;
    const std::size_t chunk = 4096;
    const std::size_t n = static_cast<std::size_t>(n_particles);
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<std::vector<Snapshot>> partial(nchunks);
    parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e) {
        auto& snaps = partial[b / chunk];
        for (double t : times) {
            Snapshot s;
            s.t = t;
            s.nx = nx;
            s.ntheta = ntheta;
            s.xw.assign(nxw, 0.0);
            s.sh.assign(shb.size(), 0.0);
            snaps.push_back(std::move(s));
        }
        for (std::size_t p = b; p < e; ++p) {
            Rng rng = make_stream(seed, p);
            MarkovState st;
            double x1, x2, th;
            sample_initial(f_in, rng, x1, x2, th);
            st.x = Vec2{x1, x2};
            st.omega = Direction::from_angle(th);
            std::tie(st.s, st.h) = sampler(rng);
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double T = times[k];
                while (st.t + st.s <= T) st = markov_step(st, rng);
                const double dt = T - st.t;
                const Vec2 w = st.omega.vec();
                snaps[k].xw[xw_index(st.x.x + dt * w.x, st.x.y + dt * w.y, st.omega.theta, nx, ntheta)] += 1.0;
                snaps[k].sh[sh_index(shb, st.t + st.s - T, st.h)] += 1.0;
            }
        }
    });
    std::vector<Snapshot> out = partial.empty() ? std::vector<Snapshot>{} : partial[0];
    for (std::size_t c = 1; c < partial.size(); ++c)
        for (std::size_t k = 0; k < out.size(); ++k) {
            for (std::size_t i = 0; i < nxw; ++i) out[k].xw[i] += partial[c][k].xw[i];
            for (std::size_t i = 0; i < out[k].sh.size(); ++i) out[k].sh[i] += partial[c][k].sh[i];
        }
    for (auto& s : out) {
        for (double& v : s.xw) v /= static_cast<double>(n_particles);
        for (double& v : s.sh) v /= static_cast<double>(n_particles);
    }
    return out;
}

std::vector<Snapshot> billiard_ensemble(const InitialData& f_in, double r, long n_particles,
                                        const std::vector<double>& times, std::uint64_t seed, int nx, int ntheta) {
    const double K = std::nearbyint(1.0 / r);
    if (!(r > 0.0 && r < 0.5) || std::abs(K * r - 1.0) > 1e-12)
        throw InvalidArgument("billiard_ensemble: r must be 1/K for an integer K >= 3");
    const std::size_t nxw = static_cast<std::size_t>(nx) * nx * ntheta;
    const std::size_t chunk = 256;
    const std::size_t n = static_cast<std::size_t>(n_particles);
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<std::vector<std::vector<double>>> partial(nchunks);
    parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e) {
        auto& hist = partial[b / chunk];
        hist.assign(times.size(), std::vector<double>(nxw, 0.0));
        for (std::size_t p = b; p < e; ++p) {
            Rng rng = make_stream(seed, p);
            double x1, x2, th;
            Vec2 y;
            for (;;) {
                sample_initial(f_in, rng, x1, x2, th);
                y = Vec2{x1 * K, x2 * K};
                const Vec2 d{y.x - std::nearbyint(y.x), y.y - std::nearbyint(y.y)};
                if (d.norm() > r) break;
            }
            billiard::ParticleState st{y, Direction::from_angle(th)};
            double t_prev = 0.0;
            try {
                for (std::size_t k = 0; k < times.size(); ++k) {
                    st = billiard::flow(st, r, (times[k] - t_prev) * K);
                    t_prev = times[k];
                    hist[k][xw_index(st.position.x * r, st.position.y * r, st.direction.theta, nx, ntheta)] += 1.0;
                }
            } catch (const LorentzError&) {
                // grazing collision: the particle is dropped from later snapshots
            }
        }
    });
    std::vector<Snapshot> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        out[k].t = times[k];
        out[k].nx = nx;
        out[k].ntheta = ntheta;
        out[k].xw.assign(nxw, 0.0);
        for (const auto& c : partial)
            for (std::size_t i = 0; i < nxw; ++i) out[k].xw[i] += c[k][i];
        for (double& v : out[k].xw) v /= static_cast<double>(n_particles);
    }
    return out;
}

HypothesisH hypothesis_h(double r, long n_traj, int n_coll, std::uint64_t seed) {
    struct Acc {
        double n{0}, sa{0}, sa2{0}, sa1{0}, sa12{0}, saa{0};
        double sb{0}, sb2{0}, sb1{0}, sb12{0}, sbb{0};
        double sq{0}, sq2{0}, sq1{0}, sq12{0}, sqq{0};
        double ss{0};
    };
    std::vector<Acc> acc(static_cast<std::size_t>(n_traj));
    parallel_for(acc.size(), [&](std::size_t p) {
        Rng rng = make_stream(seed, p);
        Vec2 y;
        for (;;) {
            y = Vec2{uniform01(rng), uniform01(rng)};
            const Vec2 d{y.x - std::nearbyint(y.x), y.y - std::nearbyint(y.y)};
            if (d.norm() > r) break;
        }
        const auto seq = billiard::collision_sequence({y, random_direction(rng)}, r, n_coll);
        std::vector<arithmetic::ObstacleConfig> cfg;
        std::vector<bool> ok;
        for (const auto& ev : seq.events) {
            try {
                cfg.push_back(reduced_params(ev.outgoing, r));
                ok.push_back(true);
            } catch (const LorentzError&) {
                cfg.emplace_back();
                ok.push_back(false);
            }
        }
        Acc& a = acc[p];
        for (std::size_t j = 0; j + 1 < cfg.size(); ++j) {
            if (!ok[j] || !ok[j + 1]) continue;
            const auto& u = cfg[j];
            const auto& v = cfg[j + 1];
            a.n += 1;
            a.sa += u.A, a.sa2 += u.A * u.A, a.sa1 += v.A, a.sa12 += v.A * v.A, a.saa += u.A * v.A;
            a.sb += u.B, a.sb2 += u.B * u.B, a.sb1 += v.B, a.sb12 += v.B * v.B, a.sbb += u.B * v.B;
            a.sq += u.Q, a.sq2 += u.Q * u.Q, a.sq1 += v.Q, a.sq12 += v.Q * v.Q, a.sqq += u.Q * v.Q;
            a.ss += u.sigma * v.sigma;
        }
    });
    Acc t;
    for (const auto& a : acc) {
        t.n += a.n;
        t.sa += a.sa, t.sa2 += a.sa2, t.sa1 += a.sa1, t.sa12 += a.sa12, t.saa += a.saa;
        t.sb += a.sb, t.sb2 += a.sb2, t.sb1 += a.sb1, t.sb12 += a.sb12, t.sbb += a.sbb;
        t.sq += a.sq, t.sq2 += a.sq2, t.sq1 += a.sq1, t.sq12 += a.sq12, t.sqq += a.sqq;
        t.ss += a.ss;
    }
    auto corr = [&](double s0, double s00, double s1, double s11, double s01) {
        const double n = t.n;
        const double cov = s01 / n - (s0 / n) * (s1 / n);
        const double v0 = s00 / n - (s0 / n) * (s0 / n), v1 = s11 / n - (s1 / n) * (s1 / n);
        return cov / std::sqrt(v0 * v1);
    };
    HypothesisH out;
    out.pairs = static_cast<long>(t.n);
    if (t.n < 2) return out;
    out.corr_A = corr(t.sa, t.sa2, t.sa1, t.sa12, t.saa);
    out.corr_B = corr(t.sb, t.sb2, t.sb1, t.sb12, t.sbb);
    out.corr_Q = corr(t.sq, t.sq2, t.sq1, t.sq12, t.sqq);
    out.mean_sigma_product = t.ss / t.n;
    out.mean_A = t.sa / t.n;
    out.mean_Q = t.sq / t.n;
    return out;
}

}  // namespace lorentz::mc
