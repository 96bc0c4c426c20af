// lorentz-bg: command-line front end.
//
// Exit status: 0 success, 1 a check failed, 2 usage or configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "lorentz/arithmetic.hpp"
#include "lorentz/billiard.hpp"
#include "lorentz/constants.hpp"
#include "lorentz/equilibrium.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kernel.hpp"
#include "lorentz/mc.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/solver.hpp"
#include "lorentz/verify.hpp"
#include "output.hpp"
#include "report_json.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lorentz;

namespace {

struct Globals {
    int threads{0};
    std::string output_dir{"."};
    std::uint64_t seed{1};
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

cli::Meta meta(const Globals& g, const std::string& command, const json& params) {
    return {command, cli::hash_hex(params.dump()), g.seed};
}

fs::path out_path(const Globals& g, const std::string& name) { return fs::path(g.output_dir) / name; }

// Meta for a Monte Carlo table, plus its JSON sidecar.
cli::Meta mc_meta(const Globals& g, const std::string& command, const json& params, const fs::path& table) {
    const auto m = meta(g, command, params);
    fs::create_directories(table.parent_path().empty() ? fs::path(".") : table.parent_path());
    cli::write_sidecar(table, m, params);
    return m;
}

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": '" + item + "' is not a number (expected a comma-separated list)");
        }
    }
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

Direction direction_from(double alpha, double theta, bool have_alpha) {
    return have_alpha ? Direction::from_vector(1.0, alpha) : Direction::from_angle(theta);
}

std::string f6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void print_check(const verify::Check& c, bool timings) {
    std::printf("%s %2d %-26s%s measured=%-12s tol=%-10s%s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.trend ? " [trend]" : "        ", cli::format_number(c.measured).c_str(),
                cli::format_number(c.tolerance).c_str(),
                timings ? (" (" + cli::format_number(c.seconds) + " s)").c_str() : "");
    std::printf("     %s\n", c.detail.c_str());
    std::fflush(stdout);
}

// Wide CSV with '#' header lines -> (first column, variable, value).
int plot_data(const std::string& input, const std::string& output, const Globals& g) {
    std::ifstream in(input);
    if (!in) throw UsageError("--input: cannot open '" + input + "'");
    std::string line;
    std::vector<std::string> cols;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (cols.empty())
            cols = cells;
        else
            rows.push_back(cells);
    }
    if (cols.size() < 2) throw UsageError("--input: expected a header with at least two columns");
    cli::TableWriter w(output.empty() ? out_path(g, fs::path(input).stem().string() + "_long.csv") : fs::path(output),
                       meta(g, "plot-data", {{"input", input}}), {cols[0], "variable", "value"});
    for (const auto& r : rows)
        for (std::size_t k = 1; k < r.size() && k < cols.size(); ++k) w.row_text(r[0] + "," + cols[k] + "," + r[k]);
    return 0;
}

int run_solve(const std::string& config_path, const Globals& g) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("--config: cannot open '" + config_path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("--config: invalid JSON: ") + e.what());
    }
    cli::RunConfig cfg;
    try {
        cfg = cli::parse_run_config(j);
    } catch (const cli::ConfigError& e) {
        throw UsageError(std::string("--config: ") + e.what());
    }
    const json resolved = cli::to_json(cfg);
    const auto m = meta(g, "solve", resolved);
    fs::create_directories(g.output_dir);
    {
        std::ofstream o(out_path(g, "config.resolved.json"));
        o << resolved.dump(2) << "\n";
    }

    const solver::Solver S(cfg.grids);
    const auto& d = S.disc();
    std::fprintf(stderr, "grid %dx%dx%d omega x %d s x %d h (%zu cells), dt %.6g, neglected tail mass %.3g\n",
                 cfg.grids.nx, cfg.grids.ny, cfg.grids.nomega, d.ns(), d.nh(), d.size(), d.max_dt(),
                 d.truncated_tail());
    const bool want_z = std::find(cfg.entropy.begin(), cfg.entropy.end(), solver::Entropy::ZLogZ) != cfg.entropy.end();
    const bool want_s = std::find(cfg.entropy.begin(), cfg.entropy.end(), solver::Entropy::Square) != cfg.entropy.end();
    const double nan = std::nan("");

    cli::TableWriter diag(out_path(g, "diagnostics.csv"), m,
                          {"t", "mass", "H_zlogz", "D_zlogz", "H_sq", "D_sq", "dist_to_CE", "coarse_dist", "lower_bound",
                           "min_F", "max_F_over_E", "free_flow_violation"});
    solver::SolveOptions opt;
    opt.report_every = cfg.report_every;
    opt.track_free_flow = cfg.free_flow;
    opt.on_report = [&](const solver::Field& f) {
        if (!cfg.snapshots) return;
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_t%.4f.csv.gz", f.t);
        cli::TableWriter w(out_path(g, name), m, {"x1", "x2", "theta", "s", "h", "F"});
        const auto& gr = cfg.grids;
        const std::size_t nb = d.block();
        for (int ix = 0; ix < gr.nx; ++ix)
            for (int iy = 0; iy < gr.ny; ++iy)
                for (int k = 0; k < gr.nomega; ++k) {
                    const std::size_t base = ((static_cast<std::size_t>(ix) * gr.ny + iy) * gr.nomega + k) * nb;
                    for (int i = 0; i < d.ns(); ++i)
                        for (int jh = 0; jh < d.nh(); ++jh)
                            w.row({(ix + 0.5) * d.dx(), (iy + 0.5) * d.dy(), d.theta(k),
                                   0.5 * (d.s_edges()[i] + d.s_edges()[i + 1]), d.h_center(jh),
                                   f.F[base + static_cast<std::size_t>(i) * d.nh() + jh]});
                }
    };
    const auto res = S.solve(S.init_field(cfg.initial), cfg.t_end, opt, cfg.lower_bound ? &cfg.initial : nullptr);
    for (const auto& r : res.reports) {
        diag.row({r.t, r.mass, want_z ? r.zlogz.H : nan, want_z ? r.zlogz.D : nan, want_s ? r.square.H : nan,
                  want_s ? r.square.D : nan, r.distance.distance, r.distance.coarse,
                  r.t >= 2.0 && cfg.lower_bound ? r.lower_bound : nan, r.min_value, r.comparison_ratio,
                  cfg.free_flow ? r.free_flow_violation : nan});
    }
    const auto& a = res.reports.front();
    const auto& b = res.reports.back();
    std::printf("steps %d dt %.6g; mass %.12g -> %.12g; H_zlogz %.6g -> %.6g; coarse distance %.6g -> %.6g\n", res.steps,
                res.dt, a.mass, b.mass, a.zlogz.H, b.zlogz.H, a.distance.coarse, b.distance.coarse);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boltzmann-Grad limit of the periodic Lorentz gas: billiard, arithmetic, kernel, Monte Carlo and "
                 "kinetic solver tools"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(LORENTZ_VERSION));
    Globals G;
    app.add_option("--threads", G.threads, "Worker threads (overrides LORENTZ_BG_THREADS)")->check(CLI::Range(1, 1024));
    app.add_option("--output-dir", G.output_dir, "Directory for every output file")->capture_default_str();
    app.add_option("--seed", G.seed, "64-bit seed for all random streams")->capture_default_str();

    std::function<int()> action;

    // billiard
    auto* bil = app.add_subcommand("billiard", "Exact billiard dynamics");
    bil->require_subcommand(1);
    double b_r = 0.05, b_theta = 0.3, b_x = 0.5, b_y = 0.5, b_hp = 0.0;
    int b_n = 20;
    auto* trace = bil->add_subcommand("trace", "Collision sequence from a point of the cell");
    trace->add_option("--r", b_r, "Obstacle radius")->check(CLI::Range(1e-9, 0.4999))->capture_default_str();
    trace->add_option("--theta", b_theta, "Initial direction angle")->capture_default_str();
    trace->add_option("--x", b_x, "Initial x1")->capture_default_str();
    trace->add_option("--y", b_y, "Initial x2")->capture_default_str();
    trace->add_option("--n", b_n, "Number of collisions")->check(CLI::Range(1, 10000000))->capture_default_str();
    trace->callback([&] {
        action = [&] {
            const auto seq = billiard::collision_sequence({{b_x, b_y}, Direction::from_angle(b_theta)}, b_r, b_n);
            cli::TableWriter w(out_path(G, "trace.csv"),
                               meta(G, "billiard trace", {{"r", b_r}, {"theta", b_theta}, {"x", b_x}, {"y", b_y}, {"n", b_n}}),
                               {"k", "time", "x1", "x2", "theta_out", "impact", "center_m", "center_n"});
            int k = 0;
            for (const auto& e : seq.events)
                w.row({double(k++), e.time, e.point.x, e.point.y, e.outgoing.theta, e.impact, double(e.center.m),
                       double(e.center.n)});
            std::printf("%zu collisions written to %s%s\n", seq.events.size(), out_path(G, "trace.csv").c_str(),
                        seq.status == billiard::SequenceStatus::Complete ? "" : " (sequence stopped early)");
            return 0;
        };
    });
    auto* transfer = bil->add_subcommand("transfer", "Transfer map (S, h) and its limit prediction");
    transfer->add_option("--hprime", b_hp, "Outgoing impact parameter")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    transfer->add_option("--theta", b_theta, "Outgoing direction angle")->capture_default_str();
    transfer->add_option("--r", b_r, "Obstacle radius")->check(CLI::Range(1e-9, 0.4999))->capture_default_str();
    transfer->callback([&] {
        action = [&] {
            const Direction w = Direction::from_angle(b_theta);
            const auto t = billiard::transfer_map(b_hp, w, b_r);
            std::printf("S=%s h=%s\n", f6(t.flight).c_str(), f6(t.impact).c_str());
            try {
                const auto l = mc::limit_transfer_at(b_hp, w, b_r);
                std::printf("limit S=%s h=%s\n", f6(l.S).c_str(), f6(l.h).c_str());
            } catch (const LorentzError& e) {
                std::printf("limit map unavailable: %s\n", e.what());
            }
            return 0;
        };
    });

    // cf
    auto* cf = app.add_subcommand("cf", "Continued fractions and three-obstacle parameters");
    cf->require_subcommand(1);
    double c_alpha = 0.5 * (std::sqrt(5.0) - 1.0), c_theta = 0.0, c_eps = 0.1;
    int c_digits = 20;
    auto* params = cf->add_subcommand("params", "(A, B, Q, Qbar, sigma) by both routes");
    auto* alpha_opt = params->add_option("--alpha", c_alpha, "Slope omega2/omega1")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    params->add_option("--theta", c_theta, "Direction angle in (0, pi/4)")->excludes(alpha_opt);
    params->add_option("--eps", c_eps, "eps = 2r/omega1")->check(CLI::Range(1e-15, 0.999))->capture_default_str();
    params->callback([&] {
        action = [&] {
            const bool have_alpha = params->count("--theta") == 0;
            const Direction w = direction_from(c_alpha, c_theta, have_alpha);
            const double r = 0.5 * c_eps * w.c;
            const auto a = arithmetic::obstacle_params_cf(w, r);
            const auto b = arithmetic::obstacle_params_farey(w, r);
            std::printf("cf:    A=%s B=%s Q=%s Qbar=%s sigma=%d N=%d\n", f6(a.A).c_str(), f6(a.B).c_str(),
                        f6(a.Q).c_str(), f6(a.Qbar).c_str(), a.sigma, a.N);
            std::printf("farey: A=%s B=%s Q=%s Qbar=%s sigma=%d\n", f6(b.A).c_str(), f6(b.B).c_str(), f6(b.Q).c_str(),
                        f6(b.Qbar).c_str(), b.sigma);
            return 0;
        };
    });
    auto* expand = cf->add_subcommand("expand", "Digits, convergents and errors d_n");
    expand->add_option("--alpha", c_alpha, "Number in (0,1)")->check(CLI::Range(1e-12, 1.0 - 1e-12))->capture_default_str();
    expand->add_option("--digits", c_digits, "Number of digits")->check(CLI::Range(1, 60))->capture_default_str();
    expand->callback([&] {
        action = [&] {
            arithmetic::StopRule stop;
            stop.max_digits = c_digits;
            arithmetic::CFExpansion e;
            try {
                e = arithmetic::cf_expand(c_alpha, stop);
            } catch (const PrecisionExhausted& ex) {
                std::printf("# %s\n", ex.what());
                stop.max_digits = 0;
                stop.eps = 1e-13;
                e = arithmetic::cf_expand(c_alpha, stop);
            }
            std::printf("n,a_n,p_n,q_n,d_n\n");
            for (std::size_t n = 0; n < e.d.size(); ++n)
                std::printf("%zu,%s,%lld,%lld,%.12g\n", n, n == 0 || n > e.digits.size() ? "" : std::to_string(e.digits[n - 1]).c_str(),
                            n < e.p.size() ? static_cast<long long>(e.p[n]) : 0LL,
                            n < e.q.size() ? static_cast<long long>(e.q[n]) : 0LL, e.d[n]);
            return 0;
        };
    });

    // kernel
    auto* ker = app.add_subcommand("kernel", "Transition kernel and equilibrium profile");
    ker->require_subcommand(1);
    double k_s = 1.0, k_h = 0.5, k_hp = 0.0;
    auto* eval = ker->add_subcommand("eval", "P(S,h|h'), Pi(h|h') and E(s,h)");
    eval->set_help_flag("--help", "Print this help message and exit");
    eval->add_option("--s", k_s, "Scaled free path S")->check(CLI::Range(0.0, 1e12))->capture_default_str();
    eval->add_option("--h", k_h, "Impact parameter h")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    eval->add_option("--hprime", k_hp, "Previous impact parameter h'")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    eval->callback([&] {
        action = [&] {
            std::printf("P=%s\n", f6(kernel::p_simple(k_s, k_h, k_hp)).c_str());
            std::printf("Pi=%s\n", f6(kernel::pi_kernel(k_h, k_hp)).c_str());
            std::printf("E(s=%g,h)=%s\n", k_s, f6(kernel::equilibrium_E(k_s, k_h)).c_str());
            return 0;
        };
    });
    auto* tab = ker->add_subcommand("tabulate", "Write the equilibrium table E(s,h)");
    tab->callback([&] {
        action = [&] {
            const auto t = kernel::EquilibriumTable::build();
            const auto path = out_path(G, "equilibrium.csv.gz");
            cli::TableWriter w(path, meta(G, "kernel tabulate", json::object()), {"s", "h", "E"});
            for (std::size_t i = 0; i < t.s_grid().size(); ++i)
                for (std::size_t jh = 0; jh < t.h_grid().size(); ++jh) w.row({t.s_grid()[i], t.h_grid()[jh], t.at(i, jh)});
            std::printf("%zu x %zu table written to %s\n", t.s_grid().size(), t.h_grid().size(), path.c_str());
            return 0;
        };
    });
    auto* kver = ker->add_subcommand("verify", "Kernel and equilibrium checks (acceptance items 1-5)");
    kver->callback([&] {
        action = [&] {
            verify::Options o;
            o.seed = G.seed;
            o.only = {1, 2, 3, 4, 5};
            o.on_check = [](const verify::Check& c) { print_check(c, false); };
            return verify::verify_all(o).all_passed() ? 0 : 1;
        };
    });

    // mc
    auto* mcs = app.add_subcommand("mc", "Monte Carlo experiments");
    mcs->require_subcommand(1);
    double m_hp = 0.0, m_alpha = 0.5 * (std::sqrt(5.0) - 1.0), m_eps = 1e-6, m_ppd = 2000.0, m_r = 0.01, m_tobs = 5.0;
    std::string m_eps_list = "1e-2,1e-3,1e-4,1e-5,1e-6", m_times = "1,5", m_initial = "cosine";
    long m_n = 100000;
    double m_tend = -1.0;
    int m_coll = 50;
    auto* kc = mcs->add_subcommand("kernel-converge", "Cesaro estimate of P(.,.|h') for decreasing eps");
    kc->add_option("--hprime", m_hp, "h'")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    kc->add_option("--alpha", m_alpha, "Slope omega2/omega1")->check(CLI::Range(1e-12, 1.0 - 1e-12))->capture_default_str();
    kc->add_option("--eps-list", m_eps_list, "Comma-separated eps values")->capture_default_str();
    kc->add_option("--ppd", m_ppd, "Radii per decade")->check(CLI::Range(10.0, 1e6))->capture_default_str();
    kc->callback([&] {
        action = [&] {
            const auto eps = parse_list(m_eps_list, "--eps-list");
            const Direction w = Direction::from_vector(1.0, m_alpha);
            cli::TableWriter out(out_path(G, "kernel_converge.csv"),
                                 mc_meta(G, "mc kernel-converge",
                                         {{"hprime", m_hp}, {"alpha", m_alpha}, {"eps", eps}, {"ppd", m_ppd},
                                          {"bins", {{"nS", 20}, {"nh", 20}, {"S_max", 4.0}}}, {"mass_floor", 1e-3}},
                                         out_path(G, "kernel_converge.csv")),
                                 {"eps", "max_rel", "l1", "samples", "excluded"});
            mc::CesaroOptions o;
            o.points_per_decade = m_ppd;
            for (double e : eps) {
                if (!(e > 0.0 && e < o.r_max)) throw UsageError("--eps-list: values must lie in (0, 0.25)");
                const auto est = mc::cesaro_kernel_estimate(m_hp, w, e, o);
                out.row({e, est.deviation.max_rel, est.deviation.l1, double(est.samples), double(est.excluded)});
                std::printf("eps=%g max_rel=%.4g L1=%.4g\n", e, est.deviation.max_rel, est.deviation.l1);
            }
            return 0;
        };
    });
    auto* cd = mcs->add_subcommand("config-dist", "Cesaro law of (A,B,Q,sigma) along dr/r");
    cd->add_option("--alpha", m_alpha, "Slope omega2/omega1")->check(CLI::Range(1e-12, 1.0 - 1e-12))->capture_default_str();
    cd->add_option("--eps", m_eps, "Smallest radius")->check(CLI::Range(1e-14, 0.2))->capture_default_str();
    cd->add_option("--ppd", m_ppd, "Radii per decade")->check(CLI::Range(10.0, 1e7))->capture_default_str();
    cd->callback([&] {
        action = [&] {
            const auto dist = mc::cesaro_config_distribution(Direction::from_vector(1.0, m_alpha), m_eps, m_ppd);
            cli::TableWriter out(out_path(G, "config_dist.csv"),
                                 mc_meta(G, "mc config-dist",
                                         {{"alpha", m_alpha}, {"eps", m_eps}, {"ppd", m_ppd}, {"bins_per_axis", dist.bins.n},
                                          {"chi2_level", 1e-3}},
                                         out_path(G, "config_dist.csv")),
                                 {"cell", "weight", "mu_mass"});
            for (std::size_t k = 0; k < dist.weights.size(); ++k) out.row({double(k), dist.weights[k], dist.expected[k]});
            std::printf("chi2=%.6g dof=%d p=%.4g mean_sigma=%.6f mean_sigma_A=%.6f mean_sigma_Q=%.6f L1=%.4g\n",
                        dist.chi2.statistic, dist.chi2.dof, dist.chi2.p_value, dist.mean_sigma, dist.mean_sigma_A,
                        dist.mean_sigma_Q, dist.deviation.l1);
            return 0;
        };
    });
    auto* mk = mcs->add_subcommand("markov", "Stationarity of E for the extended Markov chain");
    long m_replicas = 100000;
    mk->add_option("--n", m_replicas, "Independent replicas started from E")->check(CLI::Range(100L, 100000000L))->capture_default_str();
    mk->add_option("--tend", m_tobs, "Observation time of each replica")->check(CLI::Range(0.1, 1e4))->capture_default_str();
    mk->callback([&] {
        action = [&] {
            const auto table = kernel::EquilibriumTable::build();
            const auto bins = mc::SHBins::standard();
            // About two chain steps per unit time for each replica.
            const long m_steps = static_cast<long>(std::ceil(2.0 * m_tobs * static_cast<double>(m_replicas)));
            const auto st = mc::markov_stationary_test(m_steps, m_tobs, G.seed, table, bins);
            cli::TableWriter out(out_path(G, "markov_sh.csv"),
                                 mc_meta(G, "mc markov",
                                         {{"n", m_replicas}, {"tend", m_tobs}, {"s_edges_then_inf", std::vector<double>(bins.s_edges.begin(), bins.s_edges.end() - 1)}, {"nh", bins.nh},
                                          {"chi2_level", 1e-3}},
                                         out_path(G, "markov_sh.csv")),
                                 {"s_lo", "s_hi", "h_lo", "h_hi", "count", "expected"});
            for (std::size_t k = 0; k < st.counts.size(); ++k) {
                const std::size_t is = k / bins.nh;
                const int ih = static_cast<int>(k % bins.nh);
                out.row({bins.s_edges[is], bins.s_edges[is + 1], -1.0 + 2.0 * ih / bins.nh, -1.0 + 2.0 * (ih + 1) / bins.nh,
                         st.counts[k], st.expected[k] * st.samples});
            }
            std::printf("replicas=%ld steps=%ld chi2=%.6g dof=%d p=%.4g mean s per step=%.6f\n", st.samples, st.steps,
                        st.chi2.statistic, st.chi2.dof, st.chi2.p_value, st.mean_flight);
            return st.chi2.p_value > 1e-3 ? 0 : 1;
        };
    });
    auto write_snaps = [&](const std::vector<mc::Snapshot>& snaps, const std::string& name, const std::string& command,
                           json params) {
        if (!snaps.empty()) params["grid"] = {{"nx", snaps[0].nx}, {"ntheta", snaps[0].ntheta}};
        cli::TableWriter out(out_path(G, name), mc_meta(G, command, params, out_path(G, name)), {"t", "ix", "iy", "itheta", "fraction"});
        for (const auto& s : snaps)
            for (int ix = 0; ix < s.nx; ++ix)
                for (int iy = 0; iy < s.nx; ++iy)
                    for (int k = 0; k < s.ntheta; ++k)
                        out.row({s.t, double(ix), double(iy), double(k),
                                 s.xw[(static_cast<std::size_t>(ix) * s.nx + iy) * s.ntheta + k]});
        std::printf("%zu snapshots written to %s\n", snaps.size(), out_path(G, name).c_str());
    };
    auto* mb = mcs->add_subcommand("billiard", "Ensemble of exact billiard particles at radius r = 1/K");
    mb->add_option("--r", m_r, "Obstacle radius 1/K")->check(CLI::Range(1e-6, 0.34))->capture_default_str();
    mb->add_option("--n", m_n, "Particles")->check(CLI::Range(1L, 100000000L))->capture_default_str();
    auto* mb_times = mb->add_option("--times", m_times, "Comma-separated macroscopic times")->capture_default_str();
    mb->add_option("--tend", m_tend, "Single observation time (instead of --times)")->excludes(mb_times)->check(CLI::Range(0.0, 1e6));
    mb->add_option("--initial", m_initial, "uniform|cosine|bump")->check(CLI::IsMember({"uniform", "cosine", "bump"}))->capture_default_str();
    mb->callback([&] {
        action = [&] {
            InitialData f;
            f.kind = InitialData::parse_kind(m_initial);
            const auto times = m_tend >= 0.0 ? std::vector<double>{m_tend} : parse_list(m_times, "--times");
            const auto snaps = mc::billiard_ensemble(f, m_r, m_n, times, G.seed);
            write_snaps(snaps, "billiard_snapshots.csv", "mc billiard",
                        {{"r", m_r}, {"n", m_n}, {"times", times}, {"initial", m_initial}});
            return 0;
        };
    });
    auto* me = mcs->add_subcommand("ensemble", "Ensemble of the limiting Markov process");
    me->add_option("--n", m_n, "Particles")->check(CLI::Range(1L, 100000000L))->capture_default_str();
    auto* me_times = me->add_option("--times", m_times, "Comma-separated times")->capture_default_str();
    me->add_option("--tend", m_tend, "Single observation time (instead of --times)")->excludes(me_times)->check(CLI::Range(0.0, 1e6));
    me->add_option("--initial", m_initial, "uniform|cosine|bump")->check(CLI::IsMember({"uniform", "cosine", "bump"}))->capture_default_str();
    me->callback([&] {
        action = [&] {
            InitialData f;
            f.kind = InitialData::parse_kind(m_initial);
            const auto times = m_tend >= 0.0 ? std::vector<double>{m_tend} : parse_list(m_times, "--times");
            const auto table = kernel::EquilibriumTable::build();
            const auto snaps = mc::markov_ensemble(f, m_n, times, G.seed, table);
            write_snaps(snaps, "markov_snapshots.csv", "mc ensemble",
                        {{"n", m_n}, {"times", times}, {"initial", m_initial}});
            return 0;
        };
    });
    auto* hh = mcs->add_subcommand("hypothesis-h", "Lag-one correlations of consecutive configurations");
    hh->add_option("--r", m_r, "Obstacle radius")->check(CLI::Range(1e-6, 0.4))->capture_default_str();
    hh->add_option("--trajectories", m_n, "Trajectories")->check(CLI::Range(1L, 10000000L))->capture_default_str();
    hh->add_option("--collisions", m_coll, "Collisions per trajectory")->check(CLI::Range(2, 100000))->capture_default_str();
    hh->callback([&] {
        action = [&] {
            const auto h = mc::hypothesis_h(m_r, m_n, m_coll, G.seed);
            std::printf("pairs=%ld corr_A=%.5f corr_B=%.5f corr_Q=%.5f mean_sigma_product=%.5f mean_A=%.5f mean_Q=%.5f\n",
                        h.pairs, h.corr_A, h.corr_B, h.corr_Q, h.mean_sigma_product, h.mean_A, h.mean_Q);
            return 0;
        };
    });

    // solve
    std::string config_path;
    auto* solve = app.add_subcommand("solve", "Run the kinetic solver from a JSON configuration");
    solve->add_option("--config", config_path, "Configuration file (JSON)")->required();
    solve->callback([&] { action = [&] { return run_solve(config_path, G); }; });

    // verify
    auto* ver = app.add_subcommand("verify", "Acceptance checks");
    ver->require_subcommand(1);
    bool v_quick = false, v_full = false, v_timings = false;
    std::vector<int> v_only;
    auto* all = ver->add_subcommand("all", "Run every acceptance check");
    auto* q = all->add_flag("--quick", v_quick, "Reduced sample sizes and grids (default)");
    all->add_flag("--full", v_full, "Full-scale run")->excludes(q);
    all->add_option("--only", v_only, "Restrict to these check ids (comma-separated)")
        ->delimiter(',')
        ->check(CLI::Range(1, verify::kChecks));
    all->add_flag("--timings", v_timings, "Include run times in the JSON report");
    all->callback([&] {
        action = [&] {
            verify::Options o;
            o.level = v_full ? verify::Level::Full : verify::Level::Quick;
            o.seed = G.seed;
            o.only = v_only;
            o.on_check = [](const verify::Check& c) { print_check(c, true); };
            const auto rep = verify::verify_all(o);
            json j = cli::to_json(rep);
            if (!v_timings) {
                j["seconds"] = 0.0;
                for (auto& c : j["checks"]) c["seconds"] = 0.0;
            }
            fs::create_directories(G.output_dir);
            const auto path = out_path(G, "verify_report.json");
            std::ofstream(path) << j.dump(2) << "\n";
            int pass = 0;
            for (const auto& c : rep.checks) pass += c.passed;
            std::printf("%d/%zu checks passed (%s level, %.0f s); report: %s\n", pass, rep.checks.size(),
                        verify::to_string(rep.level).c_str(), rep.seconds, path.c_str());
            return rep.all_passed() ? 0 : 1;
        };
    });

    // plot-data
    std::string p_in, p_out;
    auto* plot = app.add_subcommand("plot-data", "Reshape a wide CSV into tidy long format");
    plot->add_option("--input", p_in, "Input CSV")->required();
    plot->add_option("--output", p_out, "Output CSV (default <output-dir>/<stem>_long.csv)");
    plot->callback([&] { action = [&] { return plot_data(p_in, p_out, G); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (G.threads > 0) set_threads(G.threads);
    try {
        return action ? action() : 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
