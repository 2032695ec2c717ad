#pragma once

// Doppler FWHM (rad/s) from sampled Maxwellian velocities: sample variance of
// k v_z, converted with the Gaussian FWHM factor 2 sqrt(2 ln 2).

#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

inline double sampled_doppler_fwhm(double temperature, double mass, double wavelength, std::size_t samples,
                                   std::uint64_t seed) {
    constexpr double kB = 1.380649e-23;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> v(0.0, std::sqrt(kB * temperature / mass));
    const double k = 2.0 * M_PI / wavelength;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = k * v(rng);
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(samples);
    const double var = (s2 - s * s / n) / (n - 1.0);
    return 2.0 * std::sqrt(2.0 * std::log(2.0) * var);
}

}  // namespace oracle
