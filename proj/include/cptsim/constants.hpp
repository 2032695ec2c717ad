#pragma once

#include <numbers>

namespace cpt {

// CODATA 2018 values, SI units.
namespace phys {
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double k_boltzmann = 1.380649e-23;
inline constexpr double epsilon0 = 8.8541878128e-12;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double bohr_magneton_hz_per_ut = 13996.245042;  // mu_B / h in Hz/uT
}  // namespace phys

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Angular frequency helpers: ordinary frequency in, rad/s out.
constexpr double hz(double f) { return two_pi * f; }
constexpr double khz(double f) { return two_pi * f * 1e3; }
constexpr double mhz(double f) { return two_pi * f * 1e6; }
constexpr double ghz(double f) { return two_pi * f * 1e9; }

constexpr double to_hz(double omega) { return omega / two_pi; }
constexpr double to_mhz(double omega) { return omega / two_pi * 1e-6; }

// Intensity: 1 mW/cm^2 = 10 W/m^2.
constexpr double mw_per_cm2(double i) { return 10.0 * i; }
constexpr double to_mw_per_cm2(double i_si) { return 0.1 * i_si; }

constexpr double celsius(double t) { return t + 273.15; }

}  // namespace cpt
