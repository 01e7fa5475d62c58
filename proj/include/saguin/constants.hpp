#ifndef SAGUIN_CONSTANTS_HPP
#define SAGUIN_CONSTANTS_HPP

#include <numbers>

namespace saguin::constants {

inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // H/m
inline constexpr double seconds_per_year = 31536000.0;       // 365 d
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace saguin::constants

#endif  // SAGUIN_CONSTANTS_HPP
