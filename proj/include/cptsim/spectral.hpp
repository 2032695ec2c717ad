#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "cptsim/constants.hpp"

namespace cpt {

/// Optical line broadening contributions, all in rad/s.
struct BroadeningConfig {
    double gamma_sp = mhz(5.6);
    double gamma_c = 0.0;
    double laser_linewidth = 0.0;  ///< Gamma_L, FWHM of each laser component
    double doppler_fwhm = 0.0;
    double pressure_shift = 0.0;   ///< common shift of all optical lines
};

/// Homogeneous optical coherence decay rate (gamma_sp + gamma_c + Gamma_L) / 2.
double gamma_prime(const BroadeningConfig& cfg);

/// FWHM (rad/s) of the Doppler profile of a Maxwellian gas.
double doppler_fwhm(double temperature, double mass, double wavelength);

struct PressureEffects {
    double gamma_c = 0.0;  ///< rad/s
    double shift = 0.0;    ///< rad/s
};

/// Linear buffer-gas broadening and shift. Coefficients in rad/s per kPa.
PressureEffects pressure_effects(double pressure_kpa, double broadening_per_kpa, double shift_per_kpa);

/// 1D Maxwellian along the beam, M(v) = exp(-(v/v_p)^2) / (sqrt(pi) v_p).
struct VelocityDistribution {
    double most_probable_speed = 0.0;  ///< v_p, m/s
    double wavevector = 0.0;           ///< k, rad/m

    static VelocityDistribution from_temperature(double temperature, double mass, double wavelength);
    /// Distribution with the given Doppler FWHM (rad/s) at wavevector k.
    static VelocityDistribution from_doppler_fwhm(double fwhm, double wavevector);

    double kvp() const { return wavevector * most_probable_speed; }
    double doppler_fwhm() const;
    double density(double v) const;
};

enum class Quadrature {
    automatic,      ///< Gauss-Hermite when gamma'/(k v_p) >= hermite_threshold, else adaptive
    gauss_hermite,  ///< 64-node Gauss-Hermite, no error control
    adaptive,       ///< Gauss-Kronrod with refinement around the Lorentzian
};

/// Below this ratio gamma'/(k v_p) the 64-node Hermite rule is not accurate to 1e-8.
inline constexpr double hermite_threshold = 1.5;

/// G + iF: Doppler average of gamma'(gamma' + i x)/(gamma'^2 + x^2) with
/// x = delta - k v. Throws NumericalError if adaptive quadrature misses its tolerance.
std::complex<double> gf_coefficients(double delta, double gprime, const VelocityDistribution& dist,
                                     Quadrature method = Quadrature::automatic);

double g_coefficient(double delta, double gprime, const VelocityDistribution& dist,
                     Quadrature method = Quadrature::automatic);
double f_coefficient(double delta, double gprime, const VelocityDistribution& dist,
                     Quadrature method = Quadrature::automatic);

/// Spherical components of the field polarization, quantization axis along k.
struct PolarizationWeights {
    std::complex<double> sigma_plus{0.0, 0.0};
    std::complex<double> pi{0.0, 0.0};
    std::complex<double> sigma_minus{0.0, 0.0};

    static PolarizationWeights linear();
    static PolarizationWeights circular_plus();
    static PolarizationWeights circular_minus();

    /// Weight for q = -1, 0, +1.
    std::complex<double> operator[](int q) const;
    double norm_squared() const;
};

struct LaserComponent {
    double detuning = 0.0;   ///< rad/s from the F_g=1 -> F_e=1 reference line
    double amplitude = 0.0;  ///< |E|, V/m
    double phase = 0.0;      ///< rad
    PolarizationWeights polarization = PolarizationWeights::linear();

    /// Cycle-averaged intensity (eps0 c / 2) |E|^2, W/m^2.
    double intensity() const;
};

struct LaserSpectrum {
    std::vector<LaserComponent> components;
    double linewidth = 0.0;  ///< Gamma_L shared by all components, rad/s
    /// Fraction of the nominal power represented by the retained components.
    double captured_fraction = 1.0;
    std::vector<std::string> warnings;

    double total_intensity() const;
};

/// Field amplitude (V/m) of a plane wave of the given intensity (W/m^2).
double field_amplitude(double intensity);

/// Two mutually coherent equal-intensity components; the first sits at
/// carrier_detuning, the second `separation` below it.
LaserSpectrum dichromatic_pair(double intensity_per_component, double separation, double linewidth,
                               double carrier_detuning = 0.0,
                               PolarizationWeights polarization = PolarizationWeights::linear());

/// Frequency-modulated comb: carrier at carrier_detuning, sidebands n*rf for
/// |n| <= order with amplitudes proportional to J_n(beta). Adds a warning when
/// the retained power fraction is below 99%.
LaserSpectrum fm_comb(double total_intensity, double beta, double rf, int order, double linewidth,
                      double carrier_detuning = 0.0,
                      PolarizationWeights polarization = PolarizationWeights::linear());

}  // namespace cpt
