#pragma once

// The acceptance suite: thirteen checks, each independent of the others' outcome.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lorentz::verify {

enum class Level { Quick, Full };
Level parse_level(const std::string& s);
std::string to_string(Level l);

struct Check {
    int id{0};
    std::string name;
    std::string anchor;     // the mathematical statement being checked
    bool trend{false};      // limit statement checked at finite scale
    bool passed{false};
    double measured{0.0};
    double tolerance{0.0};
    std::string detail;
    double seconds{0.0};
};

struct Report {
    Level level{Level::Quick};
    std::uint64_t seed{0};
    std::vector<Check> checks;
    double seconds{0.0};
    bool all_passed() const;
};

struct Options {
    Level level{Level::Quick};
    std::uint64_t seed{20240601};
    std::vector<int> only;  // empty: all checks
    std::function<void(const Check&)> on_check;
};

Report verify_all(const Options& opt);

/// Number of checks in the suite.
inline constexpr int kChecks = 13;

}  // namespace lorentz::verify
