#include "lorentz/initial.hpp"

#include <cmath>

#include "lorentz/constants.hpp"
#include "lorentz/errors.hpp"

namespace lorentz {

namespace {
double bump1(double x, double c, double w) {
    double d = x - c;
    d -= std::nearbyint(d);
    if (std::abs(d) >= w) return 0.0;
    const double v = std::cos(0.5 * kPi * d / w);
    return v * v;
}
}  // namespace

double InitialData::operator()(double x1, double x2, double) const {
    switch (kind) {
        case Kind::Uniform:
            return level;
        case Kind::Cosine:
            return level * (1.0 + amplitude * std::cos(kTwoPi * x1));
        case Kind::Bump:
            return level * bump1(x1, cx, width) * bump1(x2, cy, width);
    }
    return 0.0;
}

double InitialData::bound() const {
    return kind == Kind::Cosine ? level * (1.0 + std::abs(amplitude)) : level;
}

InitialData::Kind InitialData::parse_kind(const std::string& name) {
    if (name == "uniform") return Kind::Uniform;
    if (name == "cosine") return Kind::Cosine;
    if (name == "bump") return Kind::Bump;
    throw InvalidArgument("unknown initial data kind '" + name + "' (uniform|cosine|bump)");
}

}  // namespace lorentz
