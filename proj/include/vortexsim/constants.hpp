#pragma once

#include <complex>

namespace vortexsim {

using cplx = std::complex<double>;

inline constexpr cplx imag_unit{0.0, 1.0};

namespace constants {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// 87Rb, the workhorse species for pancake BECs
inline constexpr double mass_rb87 = 86.909180527 * atomic_mass_unit;  // kg

}  // namespace constants

inline const char* version_string() { return "vortexsim 0.1.0"; }

}  // namespace vortexsim
