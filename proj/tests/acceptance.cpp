// Acceptance criteria: one PASS/FAIL line each, then the details.
// Usage: acceptance [--quick|--full] [--seed N]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "lorentz/verify.hpp"

int main(int argc, char** argv) {
    using namespace lorentz::verify;
    Options opt;
    opt.level = Level::Full;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--quick")
            opt.level = Level::Quick;
        else if (a == "--full")
            opt.level = Level::Full;
        else if (a == "--seed" && i + 1 < argc)
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::fprintf(stderr, "usage: %s [--quick|--full] [--seed N]\n", argv[0]);
            return 2;
        }
    }
    opt.on_check = [](const Check& c) {
        std::printf("%s [%2d] %s%s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.trend ? " (trend)" : "");
        std::printf("       %s\n       measured %.6g, tolerance %.6g, %.1f s\n", c.detail.c_str(), c.measured,
                    c.tolerance, c.seconds);
        std::fflush(stdout);
    };
    const Report r = verify_all(opt);
    int pass = 0;
    for (const auto& c : r.checks) pass += c.passed;
    std::printf("%d of %zu criteria passed (%s level, seed %llu, %.0f s)\n", pass, r.checks.size(),
                to_string(r.level).c_str(), static_cast<unsigned long long>(r.seed), r.seconds);
    return 0;
}
