#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cptsim/analytic6.hpp"
#include "cptsim/cell.hpp"
#include "cptsim/curve.hpp"
#include "cptsim/liouville.hpp"

namespace cpt {

enum class LaserKind { pl_pair, vcsel_comb };
enum class Scheme { lin_lin, sigma_sigma };
/// thick: layered cell transmission; thin: single-point rho_exc;
/// analytic6: closed-form 6-level rho_exc.
enum class Mode { thick, thin, analytic6 };

const char* to_string(LaserKind k);
const char* to_string(Scheme s);
const char* to_string(Mode m);

/// Everything needed to simulate one measurement configuration.
struct Experiment {
    AtomConstants atom;
    bool reduced_system = false;

    LaserKind laser = LaserKind::pl_pair;
    Scheme scheme = Scheme::lin_lin;
    /// Intensity carried by the two resonant components together, W/m^2.
    double intensity = mw_per_cm2(3.8);
    std::optional<double> laser_linewidth;  ///< rad/s; per-laser default when empty
    double beta = 1.8;
    std::optional<double> rf;               ///< rad/s; half the ground splitting when empty
    int comb_order = 3;
    double optical_detuning = 0.0;          ///< delta_L of the resonant pair, rad/s
    double field_ut = 3.0;

    double temperature = celsius(68.0);
    std::optional<double> doppler_fwhm;     ///< rad/s; from temperature when empty
    double pressure_kpa = 0.5;
    double broadening_per_kpa = mhz(140.0);
    double shift_per_kpa = mhz(-60.0);
    double ground_relaxation = hz(750.0);
    double cell_length = 0.01;
    std::optional<double> rb_density;
    double density_scale = 1.0;
    double beam_diameter = 2e-3;
    std::size_t layers = 16;

    Mode mode = Mode::thick;
    double assignment_cutoff = ghz(2.0);
    bool off_resonant_pumping = true;
    Quadrature quadrature = Quadrature::automatic;
    /// false: the ground coherence also decays at the microwave Doppler half-width.
    bool dicke_narrowing = true;
    double dipole_scale = 1.0;
    double responsivity = 1.0;  ///< detector units per unit of normalized transmission
    std::size_t threads = 0;

    double linewidth() const;
    /// Ground relaxation entering the generator, rad/s.
    double relaxation() const;
    AtomicSystem system() const;
    BroadeningConfig broadening() const;
    LaserSpectrum spectrum() const;
    CellConfig cell() const;
    CoefficientOptions coefficient_options() const;
    /// Power of the resonant pair over the beam, W.
    double resonant_power() const;
};

/// One-photon profiles seen by the F_g=1 leg of the resonant pair.
struct ProfilePair {
    std::complex<double> p1;  ///< G_1 + i F_1 (F_e = 1)
    std::complex<double> p2;  ///< G_2 + i F_2 (F_e = 2)
    double ratio() const { return p1.real() / p2.real(); }
};
ProfilePair resonant_profiles(const Experiment& ex);

/// Closed-form 6-level parameters for the experiment's resonant pair.
SixLevelParams six_level_params(const Experiment& ex, double raman_detuning = 0.0);

/// Rough CPT FWHM (Hz) from the 6-level rates.
double estimated_width_hz(const Experiment& ex);

struct RamanGrid {
    double center_hz = 0.0;
    double half_span_hz = 0.0;  ///< 0: span_factor x estimated width
    double span_factor = 20.0;
    std::size_t points = 801;
    bool neighbour_cap = false;  ///< shrink the window to 0.45 x the nearest neighbour offset
};

/// Two-photon offset (Hz) of the closest Zeeman-split neighbour resonance
/// of the scheme's main dark state; empty at zero field.
std::optional<double> neighbour_offset_hz(const Experiment& ex);

std::vector<double> raman_grid(const Experiment& ex, const RamanGrid& grid);

/// Observable against Raman detuning (Hz): normalized transmitted power in
/// thick mode, rho_exc otherwise.
ScanCurve raman_scan(const Experiment& ex, const std::vector<double>& raman_hz);

/// extract_features with the amplitude scaled by the responsivity.
ResonanceFeatures resonance(const Experiment& ex, const ScanCurve& curve);

struct DetuningPoint {
    double detuning_mhz = 0.0;
    ResonanceFeatures features;
    ProfilePair profiles;
    double background = 0.0;  ///< off-resonance observable
};

std::vector<DetuningPoint> detuning_scan(const Experiment& ex, const std::vector<double>& detuning_mhz,
                                         const RamanGrid& grid = {});

/// Default optical detuning grid, MHz: -300 .. +1100 in 57 points.
std::vector<double> default_detuning_grid();

struct PowerVariant {
    std::string label;
    LaserKind laser = LaserKind::pl_pair;
    double pressure_kpa = 0.5;
    double ground_relaxation = hz(750.0);
};

struct PowerCurve {
    PowerVariant variant;
    std::vector<double> intensity_mw_cm2;
    std::vector<ResonanceFeatures> features;
};

std::vector<PowerCurve> power_scan(const Experiment& ex, const std::vector<double>& intensity_mw_cm2,
                                   const std::vector<PowerVariant>& variants, const RamanGrid& grid = {});

/// PL pair and VCSEL comb in the 0.5 kPa and 1.5 kPa cells.
std::vector<PowerVariant> default_power_variants();

struct PolarizationComparison {
    double detuning_mhz = 0.0;
    ResonanceFeatures sigma_sigma;
    ResonanceFeatures lin_lin;
    double ratio = 0.0;  ///< A_C(sigma-sigma) / A_C(lin||lin)
};

PolarizationComparison polarization_compare(const Experiment& ex, double detuning_mhz = 408.0,
                                            const RamanGrid& grid = {});

struct LinewidthResult {
    std::vector<double> intensity_mw_cm2;
    std::vector<double> fwhm_hz;
    LinearFit fit;         ///< fwhm_hz = intercept + slope * intensity_mw_cm2
    bool poor_fit = false; ///< some residual above 5%
};

LinewidthResult linewidth_vs_intensity(const Experiment& ex, const std::vector<double>& intensity_mw_cm2,
                                       const RamanGrid& grid = {});

/// Ground relaxation (rad/s) whose fitted zero-intensity width equals the target.
double calibrate_ground_relaxation(const Experiment& ex, const std::vector<double>& intensity_mw_cm2,
                                   double target_intercept_hz, const RamanGrid& grid = {});

}  // namespace cpt
