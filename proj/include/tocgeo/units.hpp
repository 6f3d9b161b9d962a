#pragma once

#include <numbers>

// All angular frequencies inside the library are rad/ns; times are ns.
// Configuration and CLI inputs use linear MHz (or kHz for decay rates) and
// are converted once at ingestion.

namespace tocgeo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// linear MHz -> rad/ns
inline constexpr double mhz(double f) { return kTwoPi * f * 1e-3; }
// linear kHz -> rad/ns
inline constexpr double khz(double f) { return kTwoPi * f * 1e-6; }
// rad/ns -> linear MHz
inline constexpr double to_mhz(double w) { return w / (kTwoPi * 1e-3); }
// rad/ns -> linear kHz
inline constexpr double to_khz(double w) { return w / (kTwoPi * 1e-6); }

}  // namespace tocgeo
