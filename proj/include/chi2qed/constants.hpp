#pragma once

#include <numbers>

namespace chi2qed::constants {

// CODATA 2018 values, SI units. Fixed: these are not configuration.
inline constexpr double speed_of_light = 2.99792458e8;     // m/s
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

} // namespace chi2qed::constants
