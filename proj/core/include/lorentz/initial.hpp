#pragma once

#include <string>

namespace lorentz {

/// Initial macroscopic density f_in(x, omega) on T^2 x S^1.
struct InitialData {
    enum class Kind { Uniform, Cosine, Bump };
    Kind kind{Kind::Uniform};
    double level{1.0};      // uniform value, or the mean of the cosine profile
    double amplitude{0.5};  // cosine: level (1 + amplitude cos(2 pi x1))
    double cx{0.5};         // bump centre and half-width
    double cy{0.5};
    double width{0.2};

    double operator()(double x1, double x2, double theta) const;
    double bound() const;
    /// Uniform | Cosine | Bump from "uniform", "cosine", "bump".
    static Kind parse_kind(const std::string& name);
};

}  // namespace lorentz
