#pragma once

namespace hbtdit::constants {

inline constexpr double electron_mass = 9.1093837e-31;   // kg
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double electron_volt = 1.602176634e-19; // J
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double fs = 1e-15;
inline constexpr double ps = 1e-12;
inline constexpr double ns = 1e-9;
inline constexpr double cm = 1e-2;

}  // namespace hbtdit::constants
