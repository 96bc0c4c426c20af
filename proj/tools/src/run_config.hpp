#pragma once

// `solve --config` documents:
// {
//   "grids":   {"nx":32, "ny":1, "nomega":32, "nh":16, "ds":0.1, "s_dense":2, "growth":1.5, "s_max":2000},
//   "cfl":     0.5,
//   "t_end":   50,
//   "initial": {"kind":"cosine", "params":{"level":1, "amplitude":0.5}},
//   "reports": {"every":1, "entropy":["zlogz","square"], "snapshots":false, "free_flow":false}
// }
// Every key is optional; missing ones take the defaults above.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/initial.hpp"
#include "lorentz/solver.hpp"

namespace lorentz::cli {

/// Invalid configuration value; the message names the key and its valid range.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    solver::Grids grids;
    InitialData initial;
    double t_end{50.0};
    double report_every{1.0};
    std::vector<solver::Entropy> entropy{solver::Entropy::ZLogZ, solver::Entropy::Square};
    bool snapshots{false};
    bool free_flow{false};
    bool lower_bound{true};
};

RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

}  // namespace lorentz::cli
