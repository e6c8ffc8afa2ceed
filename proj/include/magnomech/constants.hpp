#pragma once

#include <numbers>

namespace magnomech::constants {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double k_boltzmann = 1.380649e-23;     // J / K

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace magnomech::constants
