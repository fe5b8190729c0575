#pragma once

#include <numbers>

namespace aiexp {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI, exact since 2019.
inline constexpr double boltzmann = 1.380649e-23;  // J/K

inline constexpr double rb87_mass = 1.44316e-25;  // kg

// Only used to give pulse durations physical units; every result depends on
// the pulse area omega_max0 * tau alone.
inline constexpr double default_omega_max0 = two_pi * 25.0e3;  // rad/s

}  // namespace aiexp
