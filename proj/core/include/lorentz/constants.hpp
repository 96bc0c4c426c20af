#pragma once

namespace lorentz {

// Every kernel prefactor derives from this one value of pi^2.
inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;
inline constexpr long double kPiSqL = kPiL * kPiL;

inline constexpr double kPi = static_cast<double>(kPiL);
inline constexpr double kTwoPi = static_cast<double>(2.0L * kPiL);
inline constexpr double kPiSq = static_cast<double>(kPiSqL);
inline constexpr double k3OverPiSq = static_cast<double>(3.0L / kPiSqL);
inline constexpr double k6OverPiSq = static_cast<double>(6.0L / kPiSqL);
inline constexpr double k12OverPiSq = static_cast<double>(12.0L / kPiSqL);
inline constexpr double kOneOverPiSq = static_cast<double>(1.0L / kPiSqL);

}  // namespace lorentz
