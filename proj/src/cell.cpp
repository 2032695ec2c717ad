#include "cptsim/cell.hpp"

#include <cmath>

#include "cptsim/errors.hpp"
#include "cptsim/parallel.hpp"

namespace cpt {

double rb_vapor_pressure(double temperature) {
    const double t = temperature;
    const double log_torr = t < 312.46
        ? -94.04826 - 1961.258 / t - 0.03771687 * t + 42.57526 * std::log10(t)
        : 15.88253 - 4529.635 / t + 0.00058663 * t - 2.99138 * std::log10(t);
    return std::pow(10.0, log_torr) * 133.322368;
}

double rb_vapor_density(double temperature) {
    return rb_vapor_pressure(temperature) / (phys::k_boltzmann * temperature);
}

double CellConfig::density() const {
    return density_scale * (rb_density ? *rb_density : rb_vapor_density(temperature));
}

double CellConfig::beam_area() const { return pi * 0.25 * beam_diameter * beam_diameter; }

PropagationResult propagate(const CellConfig& cfg, const CoefficientSet& input_coeffs,
                            const LaserSpectrum& spectrum, double omega_opt) {
    if (cfg.layers < 1) throw std::invalid_argument("cell needs at least one layer");
    const std::size_t nc = spectrum.components.size();
    const double n = cfg.density();
    const double dz = cfg.length / static_cast<double>(cfg.layers);
    const double area = cfg.beam_area();
    const double to_intensity = 0.5 * phys::epsilon0 * phys::c;

    std::vector<std::complex<double>> input(nc), field(nc);
    for (std::size_t j = 0; j < nc; ++j)
        input[j] = field[j] = std::polar(spectrum.components[j].amplitude, spectrum.components[j].phase);
    auto total_power = [&](const std::vector<std::complex<double>>& f) {
        double s = 0.0;
        for (const auto& e : f) s += to_intensity * std::norm(e);
        return s * area;
    };

    // Per-component rates (gamma rho_exc share) for a given field.
    CoefficientSet cs = input_coeffs;
    std::vector<std::complex<double>> factors(nc, 1.0);
    auto solve = [&](const std::vector<std::complex<double>>& f, double& rho_exc) {
        for (std::size_t j = 0; j < nc; ++j) factors[j] = input[j] != 0.0 ? f[j] / input[j] : 1.0;
        cs = input_coeffs;
        cs.scale_components(factors);
        const auto rates = component_rates(steady_state(cs), cs);
        double total = 0.0;
        for (const auto& r : rates) total += r.real();
        rho_exc = total / cs.gamma;
        return rates;
    };
    auto advance = [&](const std::vector<std::complex<double>>& from, const std::vector<std::complex<double>>& at,
                       const std::vector<std::complex<double>>& rates, double step) {
        auto out = from;
        for (std::size_t j = 0; j < nc; ++j) {
            const double intensity = to_intensity * std::norm(at[j]);
            if (intensity <= 0.0 || n == 0.0) continue;
            const double k = n * phys::hbar * omega_opt / intensity;
            const double alpha = k * rates[j].real();
            const double beta = 0.5 * k * rates[j].imag();
            out[j] *= std::exp(std::complex<double>(-0.5 * alpha * step, -beta * step));
        }
        return out;
    };

    PropagationResult res;
    res.input_power = total_power(input);
    res.layers.reserve(cfg.layers);
    for (std::size_t l = 0; l < cfg.layers; ++l) {
        LayerState state;
        state.index = l;
        state.field = field;
        try {
            // midpoint rule across the layer
            double rho0 = 0.0;
            const auto mid = advance(field, field, solve(field, rho0), 0.5 * dz);
            const auto rates = solve(mid, state.rho_exc);
            const double before = total_power(field);
            field = advance(field, mid, rates, dz);
            state.absorbed_power = before - total_power(field);
        } catch (const NumericalError& e) {
            throw LayerError(l, e.what());
        }
        res.absorbed_power += state.absorbed_power;
        res.layers.push_back(std::move(state));
    }
    res.output_field = field;
    res.output_power = total_power(field);
    res.transmittance = res.input_power > 0.0 ? res.output_power / res.input_power : 1.0;
    return res;
}

PropagationResult propagate(const CellConfig& cfg, const AtomicSystem& system, const LaserSpectrum& spectrum,
                            const BroadeningConfig& broadening, double field_ut, double raman_detuning,
                            const CoefficientOptions& options) {
    CoefficientOptions o = options;
    o.ground_relaxation = cfg.ground_relaxation;
    const CoefficientSet cs = build_coefficients(system, spectrum, broadening, field_ut, raman_detuning, o);
    return propagate(cfg, cs, spectrum, system.constants().optical_frequency());
}

ScanCurve transmittance_vs_raman(const CellConfig& cfg, const AtomicSystem& system, const LaserSpectrum& spectrum,
                                 const BroadeningConfig& broadening, double field_ut,
                                 const std::vector<double>& raman_hz, const CoefficientOptions& options,
                                 std::size_t threads) {
    CoefficientOptions o = options;
    o.ground_relaxation = cfg.ground_relaxation;
    const CoefficientSet base = build_coefficients(system, spectrum, broadening, field_ut, 0.0, o);
    const double w = system.constants().optical_frequency();
    ScanCurve curve{"raman", "Hz", "transmittance", raman_hz, std::vector<double>(raman_hz.size())};
    parallel_for(raman_hz.size(), threads, [&](std::size_t i) {
        CoefficientSet cs = base;
        cs.set_raman_detuning(hz(raman_hz[i]));
        curve.y[i] = propagate(cfg, cs, spectrum, w).transmittance;
    });
    curve.validate();
    return curve;
}

}  // namespace cpt
