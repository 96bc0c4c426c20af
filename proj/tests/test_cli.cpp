#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>
#include <zlib.h>

#include "output.hpp"
#include "report_json.hpp"
#include "run_config.hpp"

using namespace lorentz;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("lorentz_cli_tests_" + std::to_string(::getpid())) / name;
    fs::create_directories(p.parent_path());
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(LORENTZ_BG_EXE) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string capture(const std::string& args) {
    const auto out = scratch("stdout.txt");
    [[maybe_unused]] const int rc = std::system((std::string(LORENTZ_BG_EXE) + " " + args + " > " + out.string() + " 2>&1").c_str());
    std::ifstream in(out);
    return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST_CASE("report JSON round trip") {
    verify::Report r;
    r.level = verify::Level::Full;
    r.seed = 123456789012345ULL;
    r.seconds = 1.5;
    verify::Check c;
    c.id = 4;
    c.name = "x";
    c.anchor = "a";
    c.trend = true;
    c.passed = false;
    c.measured = 0.125;
    c.tolerance = 1e-8;
    c.detail = "d";
    r.checks.push_back(c);
    const json j = cli::to_json(r);
    CHECK(j.at("schema") == "lorentz-bg/verify-report/1");
    const auto back = cli::report_from_json(j);
    CHECK(back.seed == r.seed);
    CHECK(back.level == r.level);
    REQUIRE(back.checks.size() == 1);
    CHECK(back.checks[0].id == 4);
    CHECK(back.checks[0].trend);
    CHECK(!back.checks[0].passed);
    CHECK(back.checks[0].measured == 0.125);
    CHECK(cli::to_json(back) == j);
    json bad = j;
    bad["checks"][0].erase("status");
    CHECK_THROWS_AS(cli::report_from_json(bad), std::invalid_argument);
}

TEST_CASE("run config: defaults, overrides, range errors") {
    const auto d = cli::parse_run_config(json::object());
    CHECK(d.grids.nx == 32);
    CHECK(d.t_end == 50.0);
    const auto c = cli::parse_run_config(json::parse(
        R"({"grids":{"nx":4,"ny":1},"cfl":0.25,"t_end":2,"initial":{"kind":"bump","params":{"width":0.1}},"reports":{"every":0.5,"entropy":["square"]}})"));
    CHECK(c.grids.nx == 4);
    CHECK(c.grids.cfl == 0.25);
    CHECK(c.initial.kind == InitialData::Kind::Bump);
    CHECK(c.initial.width == 0.1);
    CHECK(c.entropy.size() == 1);
    CHECK(cli::parse_run_config(cli::to_json(c)).grids.nx == 4);
    CHECK_THROWS_AS(cli::parse_run_config(json::parse(R"({"grids":{"nx":0}})")), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config(json::parse(R"({"cfl":2})")), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config(json::parse(R"({"initial":{"kind":"square"}})")), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config(json::parse(R"({"typo":1})")), cli::ConfigError);
    try {
        cli::parse_run_config(json::parse(R"({"grids":{"nh":1}})"));
    } catch (const cli::ConfigError& e) {
        CHECK(std::string(e.what()).find("grids.nh") != std::string::npos);
    }
}

TEST_CASE("output helpers") {
    CHECK(cli::hash_hex("") == "cbf29ce484222325");
    CHECK(cli::hash_hex("a").size() == 16);
    CHECK(cli::format_number(0.1) == "0.1");
    CHECK(cli::format_number(1.0 / 3.0) == "0.3333333333");
    const auto p = scratch("t.csv.gz");
    {
        cli::TableWriter w(p, {"test", "0123456789abcdef", 7}, {"a", "b"});
        w.row({1.0, 2.5});
    }
    gzFile f = gzopen(p.c_str(), "rb");
    REQUIRE(f != nullptr);
    char buf[512] = {};
    const int n = gzread(f, buf, sizeof buf - 1);
    gzclose(f);
    const std::string text(buf, n > 0 ? n : 0);
    CHECK(text.find("command=test") != std::string::npos);
    CHECK(text.find("seed=7") != std::string::npos);
    CHECK(text.find("a,b\n1,2.5\n") != std::string::npos);
}

TEST_CASE("command line: outputs and exit codes") {
    CHECK(capture("kernel eval --s 1.0 --h 0.5 --hprime 0.0").find("P=0.303964") != std::string::npos);
    CHECK(run("kernel eval --s 1.0 --h 0.5 --hprime 0.0") == 0);
    CHECK(run("kernel eval --h 2") == 2);
    CHECK(run("--no-such-flag kernel eval") == 2);
    CHECK(run("") == 2);
    CHECK(run("--help") == 0);
    CHECK(capture("kernel eval --h 2").find("--h") != std::string::npos);
    const auto cfg = scratch("bad.json");
    std::ofstream(cfg) << R"({"grids":{"nx":-3}})";
    CHECK(run("solve --config " + cfg.string()) == 2);
    const auto out = scratch("solve");
    const auto good = scratch("good.json");
    std::ofstream(good) << R"({"grids":{"nx":4,"ny":1,"nomega":8,"nh":4,"ds":0.25,"s_max":20,"kernel_subcells":1},"t_end":1,
                              "reports":{"every":0.5,"snapshots":true}})";
    CHECK(run("--output-dir " + out.string() + " solve --config " + good.string()) == 0);
    CHECK(fs::exists(out / "diagnostics.csv"));
    CHECK(fs::exists(out / "config.resolved.json"));
    CHECK(fs::exists(out / "snapshot_t1.0000.csv.gz"));
    std::ifstream diag(out / "diagnostics.csv");
    std::string meta, header;
    std::getline(diag, meta);
    std::getline(diag, header);
    CHECK(header.rfind("t,mass,H_zlogz,D_zlogz,H_sq,D_sq,dist_to_CE,coarse_dist,lower_bound", 0) == 0);
    CHECK(run("--output-dir " + out.string() + " plot-data --input " + (out / "diagnostics.csv").string()) == 0);
    CHECK(fs::exists(out / "diagnostics_long.csv"));
}

TEST_CASE("verify writes a reproducible report") {
    const auto a = scratch("va"), b = scratch("vb");
    CHECK(run("--output-dir " + a.string() + " verify all --quick --only 3,6") == 0);
    CHECK(run("--output-dir " + b.string() + " verify all --quick --only 3,6") == 0);
    std::ifstream fa(a / "verify_report.json"), fb(b / "verify_report.json");
    const std::string sa{std::istreambuf_iterator<char>(fa), {}}, sb{std::istreambuf_iterator<char>(fb), {}};
    CHECK(!sa.empty());
    CHECK(sa == sb);
    const auto rep = cli::report_from_json(json::parse(sa));
    CHECK(rep.checks.size() == 2);
}
