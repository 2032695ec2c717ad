#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "cptsim/curve.hpp"
#include "cptsim/liouville.hpp"

namespace cpt {

/// Saturated Rb vapor pressure (Pa); solid below 312.46 K, liquid above.
double rb_vapor_pressure(double temperature);
/// Number density (m^-3) of the saturated vapor.
double rb_vapor_density(double temperature);

struct CellConfig {
    double length = 0.01;                 ///< m
    double temperature = celsius(68.0);   ///< K
    std::optional<double> rb_density;     ///< m^-3; vapor-pressure model when empty
    double density_scale = 1.0;
    double pressure_kpa = 0.5;
    std::size_t layers = 16;
    double ground_relaxation = hz(750.0); ///< rad/s
    double beam_diameter = 2e-3;          ///< m, uniform disk

    double density() const;
    double beam_area() const;
};

struct LayerState {
    std::size_t index = 0;
    std::vector<std::complex<double>> field;  ///< per component at the layer entrance, V/m
    double rho_exc = 0.0;
    double absorbed_power = 0.0;              ///< W
};

struct PropagationResult {
    std::vector<LayerState> layers;
    std::vector<std::complex<double>> output_field;
    double input_power = 0.0;   ///< W over the beam area
    double output_power = 0.0;
    double absorbed_power = 0.0;  ///< sum over layers
    double transmittance = 1.0;
};

/// Layered propagation starting from coefficients built for the input fields.
/// A failed steady state is rethrown as LayerError with the layer index.
PropagationResult propagate(const CellConfig& cfg, const CoefficientSet& input_coeffs,
                            const LaserSpectrum& spectrum, double omega_opt);

PropagationResult propagate(const CellConfig& cfg, const AtomicSystem& system, const LaserSpectrum& spectrum,
                            const BroadeningConfig& broadening, double field_ut, double raman_detuning,
                            const CoefficientOptions& options = {});

/// T(Omega); Omega grid in Hz. Grid points are solved independently.
ScanCurve transmittance_vs_raman(const CellConfig& cfg, const AtomicSystem& system, const LaserSpectrum& spectrum,
                                 const BroadeningConfig& broadening, double field_ut,
                                 const std::vector<double>& raman_hz, const CoefficientOptions& options = {},
                                 std::size_t threads = 1);

}  // namespace cpt
