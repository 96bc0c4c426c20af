#include "run_config.hpp"

#include <cmath>

namespace lorentz::cli {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key, double def, double lo, double hi, const std::string& path) {
    if (!obj.contains(key)) return def;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(path + key + ": expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi) || !std::isfinite(x))
        throw ConfigError(path + key + " = " + v.dump() + " outside [" + json(lo).dump() + ", " + json(hi).dump() + "]");
    return x;
}

int integer(const json& obj, const char* key, int def, int lo, int hi, const std::string& path) {
    if (!obj.contains(key)) return def;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(path + key + ": expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi)
        throw ConfigError(path + key + " = " + v.dump() + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
}

const json& object(const json& j, const char* key) {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    if (!j.at(key).is_object()) throw ConfigError(std::string(key) + ": expected an object");
    return j.at(key);
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    for (const auto& [k, v] : j.items())
        if (k != "grids" && k != "cfl" && k != "t_end" && k != "initial" && k != "reports")
            throw ConfigError("config: unknown key '" + k + "'");
    RunConfig c;
    const json& g = object(j, "grids");
    auto& G = c.grids;
    G.nx = integer(g, "nx", G.nx, 1, 1024, "grids.");
    G.ny = integer(g, "ny", G.ny, 1, 1024, "grids.");
    G.nomega = integer(g, "nomega", G.nomega, 4, 1024, "grids.");
    G.nh = integer(g, "nh", G.nh, 2, 512, "grids.");
    G.ds = number(g, "ds", G.ds, 1e-4, 10.0, "grids.");
    G.s_dense = number(g, "s_dense", G.s_dense, 1e-3, 1e3, "grids.");
    G.growth = number(g, "growth", G.growth, 1.0, 4.0, "grids.");
    G.s_max = number(g, "s_max", G.s_max, G.s_dense * (1.0 + 1e-12), 1e6, "grids.");
    G.kernel_subcells = integer(g, "kernel_subcells", G.kernel_subcells, 1, 64, "grids.");
    G.cfl = number(j, "cfl", G.cfl, 1e-6, 1.0, "");
    c.t_end = number(j, "t_end", c.t_end, 0.0, 1e6, "");

    const json& in = object(j, "initial");
    if (in.contains("kind")) {
        if (!in.at("kind").is_string()) throw ConfigError("initial.kind: expected uniform|cosine|bump");
        try {
            c.initial.kind = InitialData::parse_kind(in.at("kind").get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("initial.kind: ") + e.what());
        }
    }
    const json& p = object(in, "params");
    auto& I = c.initial;
    I.level = number(p, "level", I.level, 0.0, 1e12, "initial.params.");
    I.amplitude = number(p, "amplitude", I.amplitude, -1.0, 1.0, "initial.params.");
    I.cx = number(p, "cx", I.cx, 0.0, 1.0, "initial.params.");
    I.cy = number(p, "cy", I.cy, 0.0, 1.0, "initial.params.");
    I.width = number(p, "width", I.width, 1e-3, 0.5, "initial.params.");

    const json& r = object(j, "reports");
    c.report_every = number(r, "every", c.report_every, 1e-6, 1e6, "reports.");
    if (r.contains("entropy")) {
        if (!r.at("entropy").is_array()) throw ConfigError("reports.entropy: expected an array of zlogz|square");
        c.entropy.clear();
        for (const auto& e : r.at("entropy")) {
            const auto s = e.is_string() ? e.get<std::string>() : "";
            if (s == "zlogz")
                c.entropy.push_back(solver::Entropy::ZLogZ);
            else if (s == "square")
                c.entropy.push_back(solver::Entropy::Square);
            else
                throw ConfigError("reports.entropy: " + e.dump() + " is not zlogz|square");
        }
    }
    auto flag = [&](const char* key, bool def) {
        if (!r.contains(key)) return def;
        if (!r.at(key).is_boolean()) throw ConfigError(std::string("reports.") + key + ": expected true|false");
        return r.at(key).get<bool>();
    };
    c.snapshots = flag("snapshots", c.snapshots);
    c.free_flow = flag("free_flow", c.free_flow);
    c.lower_bound = flag("lower_bound", c.lower_bound);
    return c;
}

json to_json(const RunConfig& c) {
    const auto& G = c.grids;
    const auto& I = c.initial;
    const char* kind = I.kind == InitialData::Kind::Uniform ? "uniform"
                       : I.kind == InitialData::Kind::Cosine ? "cosine"
                                                              : "bump";
    json ent = json::array();
    for (auto e : c.entropy) ent.push_back(solver::to_string(e));
    return {{"grids",
             {{"nx", G.nx},
              {"ny", G.ny},
              {"nomega", G.nomega},
              {"nh", G.nh},
              {"ds", G.ds},
              {"s_dense", G.s_dense},
              {"growth", G.growth},
              {"s_max", G.s_max},
              {"kernel_subcells", G.kernel_subcells}}},
            {"cfl", G.cfl},
            {"t_end", c.t_end},
            {"initial",
             {{"kind", kind},
              {"params", {{"level", I.level}, {"amplitude", I.amplitude}, {"cx", I.cx}, {"cy", I.cy}, {"width", I.width}}}}},
            {"reports",
             {{"every", c.report_every},
              {"entropy", ent},
              {"snapshots", c.snapshots},
              {"free_flow", c.free_flow},
              {"lower_bound", c.lower_bound}}}};
}

}  // namespace lorentz::cli
