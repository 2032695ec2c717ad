#include "cptsim/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "cptsim/errors.hpp"
#include "cptsim/parallel.hpp"

namespace cpt {

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = 0.5 * (a + b);
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

double main_resonance_hz(const Experiment& ex) {
    if (ex.scheme == Scheme::sigma_sigma) return 0.0;
    const auto [a, b] = lambda_resonance_offsets(ex.field_ut, ex.atom);
    return to_hz(0.5 * (a + b));
}

}  // namespace

const char* to_string(LaserKind k) { return k == LaserKind::pl_pair ? "pl-pair" : "vcsel-comb"; }
const char* to_string(Scheme s) { return s == Scheme::lin_lin ? "lin-lin" : "sigma-sigma"; }
const char* to_string(Mode m) {
    switch (m) {
        case Mode::thick: return "thick";
        case Mode::thin: return "thin";
        case Mode::analytic6: return "analytic6";
    }
    return "?";
}

double Experiment::linewidth() const {
    if (laser_linewidth) return *laser_linewidth;
    return laser == LaserKind::pl_pair ? mhz(0.04) : mhz(100.0);
}

double Experiment::relaxation() const {
    if (dicke_narrowing) return ground_relaxation;
    const auto dist = VelocityDistribution::from_temperature(temperature, atom.mass, atom.wavelength);
    const double k_mw = atom.ground_hfs / phys::c;
    return ground_relaxation + std::sqrt(std::log(2.0)) * k_mw * dist.most_probable_speed;
}

AtomicSystem Experiment::system() const { return reduced_system ? reduced_six_level(atom) : build_rb87_d1(atom); }

BroadeningConfig Experiment::broadening() const {
    const auto pe = pressure_effects(pressure_kpa, broadening_per_kpa, shift_per_kpa);
    BroadeningConfig b;
    b.gamma_sp = atom.gamma_sp;
    b.gamma_c = pe.gamma_c;
    b.pressure_shift = pe.shift;
    b.laser_linewidth = linewidth();
    b.doppler_fwhm = doppler_fwhm ? *doppler_fwhm : cpt::doppler_fwhm(temperature, atom.mass, atom.wavelength);
    return b;
}

LaserSpectrum Experiment::spectrum() const {
    const auto pol = scheme == Scheme::lin_lin ? PolarizationWeights::linear() : PolarizationWeights::circular_plus();
    if (laser == LaserKind::pl_pair)
        return dichromatic_pair(0.5 * intensity, atom.ground_hfs, linewidth(), optical_detuning, pol);
    const double f = rf ? *rf : 0.5 * atom.ground_hfs;
    const double j1 = std::cyl_bessel_j(1, beta);
    if (!(j1 * j1 > 0.0)) throw std::invalid_argument("modulation index leaves no first-order sidebands");
    const double total = intensity / (2.0 * j1 * j1);
    return fm_comb(total, beta, f, comb_order, linewidth(), optical_detuning - f, pol);
}

CellConfig Experiment::cell() const {
    CellConfig c;
    c.length = cell_length;
    c.temperature = temperature;
    c.rb_density = rb_density;
    c.density_scale = density_scale;
    c.pressure_kpa = pressure_kpa;
    c.layers = layers;
    c.ground_relaxation = relaxation();
    c.beam_diameter = beam_diameter;
    return c;
}

CoefficientOptions Experiment::coefficient_options() const {
    CoefficientOptions o;
    o.ground_relaxation = relaxation();
    o.assignment_cutoff = assignment_cutoff;
    o.off_resonant_pumping = off_resonant_pumping;
    o.quadrature = quadrature;
    o.dipole_scale = dipole_scale;
    return o;
}

double Experiment::resonant_power() const { return intensity * cell().beam_area(); }

ProfilePair resonant_profiles(const Experiment& ex) {
    const auto b = ex.broadening();
    const auto dist = VelocityDistribution::from_doppler_fwhm(b.doppler_fwhm, ex.atom.wavevector());
    const double gp = gamma_prime(b);
    const double d1 = ex.optical_detuning - b.pressure_shift;
    return {gf_coefficients(d1, gp, dist, ex.quadrature),
            gf_coefficients(d1 - ex.atom.excited_hfs, gp, dist, ex.quadrature)};
}

SixLevelParams six_level_params(const Experiment& ex, double raman_detuning) {
    const auto prof = resonant_profiles(ex);
    const double s = reduced_dipole(ex.atom) * ex.dipole_scale * field_amplitude(0.5 * ex.intensity) /
                     (2.0 * phys::hbar);
    auto p = pump_rates(prof.p1.real(), prof.p2.real(), prof.p1.imag(), prof.p2.imag(), s / std::sqrt(2.0),
                        gamma_prime(ex.broadening()));
    p.Gamma = ex.relaxation();
    p.Omega = raman_detuning - lambda_resonance_offsets(ex.field_ut, ex.atom).first;
    p.gamma = ex.atom.gamma_sp;
    return p;
}

double estimated_width_hz(const Experiment& ex) { return to_hz(cpt_term_width(six_level_params(ex))); }

std::optional<double> neighbour_offset_hz(const Experiment& ex) {
    const double main = main_resonance_hz(ex);
    const auto [la, lb] = lambda_resonance_offsets(ex.field_ut, ex.atom);
    const double exclusion = std::max(1.0, 4.0 * std::abs(to_hz(la - lb)));
    std::optional<double> best;
    for (int m1 = -1; m1 <= 1; ++m1) {
        for (int m2 = -2; m2 <= 2; ++m2) {
            const int dm = std::abs(m2 - m1);
            const bool allowed = ex.scheme == Scheme::lin_lin ? (dm == 0 || dm == 2) : dm == 0;
            if (!allowed) continue;
            const double off =
                to_hz(zeeman_offset({Manifold::ground, 2, m2, 0.0}, ex.field_ut, ex.atom) -
                      zeeman_offset({Manifold::ground, 1, m1, 0.0}, ex.field_ut, ex.atom)) - main;
            if (std::abs(off) <= exclusion) continue;
            if (!best || std::abs(off) < std::abs(*best)) best = off;
        }
    }
    return best;
}

std::vector<double> raman_grid(const Experiment& ex, const RamanGrid& grid) {
    double half = grid.half_span_hz;
    double center = grid.center_hz;
    if (half <= 0.0) {
        const auto p = six_level_params(ex);
        half = grid.span_factor * to_hz(cpt_term_width(p));
        if (const auto nb = neighbour_offset_hz(ex); nb && grid.neighbour_cap) half = std::min(half, 0.45 * std::abs(*nb));
        center += main_resonance_hz(ex) + to_hz(p.Delta);
    }
    return linspace(center - half, center + half, std::max<std::size_t>(grid.points, 5));
}

ScanCurve raman_scan(const Experiment& ex, const std::vector<double>& raman_hz) {
    ScanCurve curve;
    curve.parameter = "raman";
    curve.unit = "Hz";
    curve.x = raman_hz;
    curve.y.assign(raman_hz.size(), 0.0);

    if (ex.mode == Mode::analytic6) {
        curve.observable = "rho_exc";
        for (std::size_t i = 0; i < raman_hz.size(); ++i)
            curve.y[i] = rho_exc_closed_form(six_level_params(ex, hz(raman_hz[i])));
        curve.validate();
        return curve;
    }

    const auto system = ex.system();
    const auto spectrum = ex.spectrum();
    const auto base = build_coefficients(system, spectrum, ex.broadening(), ex.field_ut, 0.0, ex.coefficient_options());
    if (ex.mode == Mode::thin) {
        curve.observable = "rho_exc";
        parallel_for(raman_hz.size(), ex.threads, [&](std::size_t i) {
            CoefficientSet cs = base;
            cs.set_raman_detuning(hz(raman_hz[i]));
            curve.y[i] = excited_population(steady_state(cs), cs);
        });
    } else {
        curve.observable = "transmitted_power_over_resonant_input";
        const auto cell = ex.cell();
        const double w = ex.atom.optical_frequency();
        const double norm = ex.resonant_power();
        parallel_for(raman_hz.size(), ex.threads, [&](std::size_t i) {
            CoefficientSet cs = base;
            cs.set_raman_detuning(hz(raman_hz[i]));
            curve.y[i] = propagate(cell, cs, spectrum, w).output_power / norm;
        });
    }
    curve.validate();
    return curve;
}

ResonanceFeatures resonance(const Experiment& ex, const ScanCurve& curve) {
    auto f = extract_features(curve);
    if (ex.mode == Mode::thick) {
        f.amplitude *= ex.responsivity;
        f.background *= ex.responsivity;
    }
    return f;
}

std::vector<DetuningPoint> detuning_scan(const Experiment& ex, const std::vector<double>& detuning_mhz,
                                         const RamanGrid& grid) {
    std::vector<DetuningPoint> out;
    out.reserve(detuning_mhz.size());
    for (double d : detuning_mhz) {
        Experiment e = ex;
        e.optical_detuning = mhz(d);
        DetuningPoint pt;
        pt.detuning_mhz = d;
        pt.features = resonance(e, raman_scan(e, raman_grid(e, grid)));
        pt.profiles = resonant_profiles(e);
        pt.background = pt.features.background;
        out.push_back(pt);
    }
    return out;
}

std::vector<double> default_detuning_grid() { return linspace(-300.0, 1100.0, 57); }

std::vector<PowerCurve> power_scan(const Experiment& ex, const std::vector<double>& intensity_mw_cm2,
                                   const std::vector<PowerVariant>& variants, const RamanGrid& grid) {
    std::vector<PowerCurve> out;
    for (const auto& v : variants) {
        PowerCurve pc;
        pc.variant = v;
        pc.intensity_mw_cm2 = intensity_mw_cm2;
        for (double i : intensity_mw_cm2) {
            Experiment e = ex;
            e.laser = v.laser;
            e.pressure_kpa = v.pressure_kpa;
            e.ground_relaxation = v.ground_relaxation;
            e.intensity = mw_per_cm2(i);
            if (i <= 0.0) {
                pc.features.push_back({});
                continue;
            }
            pc.features.push_back(resonance(e, raman_scan(e, raman_grid(e, grid))));
        }
        out.push_back(std::move(pc));
    }
    return out;
}

std::vector<PowerVariant> default_power_variants() {
    return {
        {"pl-0.5kPa", LaserKind::pl_pair, 0.5, hz(750.0)},
        {"vcsel-0.5kPa", LaserKind::vcsel_comb, 0.5, hz(750.0)},
        {"pl-1.5kPa", LaserKind::pl_pair, 1.5, hz(400.0)},
        {"vcsel-1.5kPa", LaserKind::vcsel_comb, 1.5, hz(400.0)},
    };
}

PolarizationComparison polarization_compare(const Experiment& ex, double detuning_mhz, const RamanGrid& grid) {
    PolarizationComparison pc;
    pc.detuning_mhz = detuning_mhz;
    Experiment lin = ex, sig = ex;
    lin.optical_detuning = sig.optical_detuning = mhz(detuning_mhz);
    lin.scheme = Scheme::lin_lin;
    sig.scheme = Scheme::sigma_sigma;
    // Identical sweep for both schemes.
    const auto x = raman_grid(lin, grid);
    pc.lin_lin = resonance(lin, raman_scan(lin, x));
    pc.sigma_sigma = resonance(sig, raman_scan(sig, x));
    pc.ratio = pc.lin_lin.amplitude > 0.0 ? pc.sigma_sigma.amplitude / pc.lin_lin.amplitude
                                          : std::numeric_limits<double>::infinity();
    return pc;
}

LinewidthResult linewidth_vs_intensity(const Experiment& ex, const std::vector<double>& intensity_mw_cm2,
                                       const RamanGrid& grid) {
    if (intensity_mw_cm2.size() < 4) throw std::invalid_argument("linewidth fit needs at least 4 intensities");
    LinewidthResult r;
    r.intensity_mw_cm2 = intensity_mw_cm2;
    for (double i : intensity_mw_cm2) {
        Experiment e = ex;
        e.intensity = mw_per_cm2(i);
        const auto f = resonance(e, raman_scan(e, raman_grid(e, grid)));
        if (!f.found || f.fwhm <= 0.0) throw NumericalError("no resolvable resonance at " + std::to_string(i) + " mW/cm^2");
        r.fwhm_hz.push_back(f.fwhm);
    }
    r.fit = fit_line(r.intensity_mw_cm2, r.fwhm_hz);
    r.poor_fit = r.fit.max_relative_residual > 0.05;
    return r;
}

double calibrate_ground_relaxation(const Experiment& ex, const std::vector<double>& intensity_mw_cm2,
                                   double target_intercept_hz, const RamanGrid& grid) {
    auto intercept_error = [&](double gamma) {
        Experiment e = ex;
        e.ground_relaxation = gamma;
        return linewidth_vs_intensity(e, intensity_mw_cm2, grid).fit.intercept - target_intercept_hz;
    };
    double lo = 0.25 * pi * target_intercept_hz, hi = 4.0 * pi * target_intercept_hz;
    double flo = intercept_error(lo), fhi = intercept_error(hi);
    for (int k = 0; k < 8 && flo > 0.0; ++k) {
        hi = lo;
        fhi = flo;
        lo *= 0.25;
        flo = intercept_error(lo);
    }
    for (int k = 0; k < 8 && fhi < 0.0; ++k) {
        lo = hi;
        flo = fhi;
        hi *= 4.0;
        fhi = intercept_error(hi);
    }
    if (flo > 0.0 || fhi < 0.0) throw NumericalError("cannot bracket the ground relaxation rate");
    std::uintmax_t iters = 60;
    const auto root = boost::math::tools::toms748_solve(
        intercept_error, lo, hi, flo, fhi,
        [](double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b)); }, iters);
    return 0.5 * (root.first + root.second);
}

}  // namespace cpt
