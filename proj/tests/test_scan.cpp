#include <doctest.h>

#include <cmath>

#include "cptsim/curve.hpp"
#include "cptsim/scan.hpp"

using namespace cpt;

namespace {

ScanCurve lorentzian_curve(double fwhm, double step, double span, double amplitude, double background,
                           double center = 0.0) {
    ScanCurve c{"raman", "Hz", "synthetic", {}, {}};
    for (double x = -span; x <= span + 0.5 * step; x += step) {
        c.x.push_back(x);
        const double u = 2.0 * (x - center) / fwhm;
        c.y.push_back(background + amplitude / (1.0 + u * u));
    }
    return c;
}

// Half-maximum width of a sum of two Lorentzians, by bisection.
double two_lorentzian_fwhm(double fwhm, double sep) {
    auto y = [&](double x) {
        const double a = 2.0 * (x - 0.5 * sep) / fwhm, b = 2.0 * (x + 0.5 * sep) / fwhm;
        return 1.0 / (1.0 + a * a) + 1.0 / (1.0 + b * b);
    };
    const double half = 0.5 * y(0.0);
    double lo = 0.0, hi = 10.0 * fwhm;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (y(mid) > half ? lo : hi) = mid;
    }
    return lo + hi;
}

}  // namespace

TEST_CASE("Lorentzian round trip") {
    for (double step_frac : {0.25, 0.05, 1.0 / 7.0}) {
        const double fwhm = 3000.0;
        const auto c = lorentzian_curve(fwhm, step_frac * fwhm, 20.0 * fwhm, 1.0, 0.3);
        const auto f = extract_features(c);
        REQUIRE(f.found);
        CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(f.fwhm == doctest::Approx(fwhm).epsilon(1e-3));
        CHECK(f.center == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(f.polarity == 1);
    }
    const auto dip = lorentzian_curve(500.0, 20.0, 10000.0, -0.2, 1.0, 130.0);
    const auto f = extract_features(dip);
    CHECK(f.polarity == -1);
    CHECK(f.amplitude == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(f.center == doctest::Approx(130.0).epsilon(1e-6));
    CHECK(f.fwhm == doctest::Approx(500.0).epsilon(1e-3));
}

TEST_CASE("flat curve has no resonance") {
    ScanCurve c{"raman", "Hz", "flat", {}, {}};
    for (int i = 0; i < 101; ++i) {
        c.x.push_back(i);
        c.y.push_back(0.42);
    }
    const auto f = extract_features(c);
    CHECK(!f.found);
    CHECK(f.amplitude == 0.0);
}

TEST_CASE("overlapping Lambda_a / Lambda_b resonances merge") {
    ScanCurve c{"raman", "Hz", "pair", {}, {}};
    for (int i = -400; i <= 400; ++i) {
        const double x = 50.0 * i;
        const double a = 2.0 * (x - 84.0) / 1000.0, b = 2.0 * (x + 84.0) / 1000.0;
        c.x.push_back(x);
        c.y.push_back(1.0 / (1.0 + a * a) + 1.0 / (1.0 + b * b));
    }
    const auto f = extract_features(c);
    REQUIRE(f.found);
    CHECK(f.fwhm > 1000.0);
    CHECK(f.fwhm == doctest::Approx(two_lorentzian_fwhm(1000.0, 168.0)).epsilon(2e-3));
}

TEST_CASE("scan curves validate their grid") {
    ScanCurve c{"raman", "Hz", "y", {0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    ScanCurve d{"raman", "Hz", "y", {0.0, 1.0}, {1.0, NAN}};
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("zero field, real profiles: the Raman curve is symmetric") {
    Experiment e;
    e.field_ut = 0.0;
    const auto sys = e.system();
    auto o = e.coefficient_options();
    o.profile_override = [](std::size_t, const Sublevel& s) { return std::complex<double>(s.F == 1 ? 0.3 : 0.05, 0.0); };
    const auto base = build_coefficients(sys, e.spectrum(), e.broadening(), 0.0, 0.0, o);
    for (double om : {50.0, 700.0, 4000.0}) {
        auto a = base, b = base;
        a.set_raman_detuning(hz(om));
        b.set_raman_detuning(hz(-om));
        CHECK(excited_population(steady_state(a), a) ==
              doctest::Approx(excited_population(steady_state(b), b)).epsilon(1e-10));
    }
}

TEST_CASE("3 uT splits the resonance into a 168 Hz doublet") {
    Experiment e;
    e.mode = Mode::thin;
    e.intensity = mw_per_cm2(0.002);
    e.ground_relaxation = hz(5.0);
    std::vector<double> grid;
    for (int i = -150; i <= 150; ++i) grid.push_back(2.0 * i);
    const auto c = raman_scan(e, grid);
    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        if (c.y[i] < c.y[i - 1] && c.y[i] < c.y[i + 1]) minima.push_back(grid[i]);
    REQUIRE(minima.size() == 2);
    CHECK(minima[1] - minima[0] == doctest::Approx(168.0).epsilon(0.03));
    CHECK(to_hz(lambda_resonance_offsets(3.0).first - lambda_resonance_offsets(3.0).second) == doctest::Approx(168.0));
}

TEST_CASE("default regime: single resonance with a kHz-scale width") {
    Experiment e;
    const auto c = raman_scan(e, raman_grid(e, {}));
    const auto f = resonance(e, c);
    REQUIRE(f.found);
    CHECK(f.polarity == 1);
    CHECK(f.fwhm > 1000.0);
    CHECK(f.fwhm < 10000.0);
    CHECK(c.observable == "transmitted_power_over_resonant_input");
}

TEST_CASE("Raman grid defaults") {
    Experiment e;
    const auto g = raman_grid(e, {});
    CHECK(g.size() == 801);
    CHECK(g.back() - g.front() == doctest::Approx(2.0 * 20.0 * estimated_width_hz(e)).epsilon(1e-9));
    RamanGrid fixed;
    fixed.half_span_hz = 5000.0;
    fixed.center_hz = 100.0;
    fixed.points = 11;
    const auto h = raman_grid(e, fixed);
    CHECK(h.size() == 11);
    CHECK(h.back() - h.front() == doctest::Approx(10000.0));
    const auto nb = neighbour_offset_hz(e);
    REQUIRE(nb);
    CHECK(std::abs(*nb) == doctest::Approx(41975.0).epsilon(1e-3));
}

TEST_CASE("no light, no signal") {
    Experiment e;
    const auto curves = power_scan(e, {0.0, 1e-4}, {{"pl", LaserKind::pl_pair, 0.5, hz(750.0)}});
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].features[0].amplitude == 0.0);
    CHECK(curves[0].features[1].amplitude < 1e-4);
}

TEST_CASE("polarization comparison at the F_e=1 line") {
    Experiment e;
    const auto pc = polarization_compare(e, 0.0);
    CHECK(pc.sigma_sigma.found);
    CHECK(pc.lin_lin.found);
    CHECK(pc.ratio > 0.1);
    CHECK(pc.ratio < 10.0);
    // full-model golden value
    CHECK(pc.ratio == doctest::Approx(0.393688).epsilon(1e-4));
}

TEST_CASE("sigma-sigma resonance survives at the crossover") {
    Experiment e;
    const auto pc = polarization_compare(e, 408.0);
    CHECK(pc.sigma_sigma.found);
    CHECK(pc.sigma_sigma.amplitude > 1e-3);
}

TEST_CASE("analytic6 width law") {
    Experiment e;
    e.mode = Mode::analytic6;
    const auto low = linewidth_vs_intensity(e, {0.01, 0.02, 0.03, 0.04});
    CHECK(low.fit.intercept == doctest::Approx(2.0 * to_hz(e.ground_relaxation)).epsilon(1e-3));
    const auto r = linewidth_vs_intensity(e, {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(r.fit.r_squared > 0.99);
    CHECK(!r.poor_fit);
    CHECK_THROWS_AS(linewidth_vs_intensity(e, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("doubling V0 quadruples W and the intensity-dependent width") {
    Experiment e;
    e.mode = Mode::analytic6;
    auto e2 = e;
    e2.dipole_scale = 2.0;
    CHECK(six_level_params(e2).W == doctest::Approx(4.0 * six_level_params(e).W).epsilon(1e-13));
    const std::vector<double> grid{0.005, 0.01, 0.015, 0.02};
    const auto a = linewidth_vs_intensity(e, grid), b = linewidth_vs_intensity(e2, grid);
    CHECK(b.fit.slope == doctest::Approx(4.0 * a.fit.slope).epsilon(0.01));
    // exactly: twice the dipole at I is the same width as the plain dipole at 4 I
    e.intensity = mw_per_cm2(4.0);
    e2.intensity = mw_per_cm2(1.0);
    CHECK(estimated_width_hz(e2) == doctest::Approx(estimated_width_hz(e)).epsilon(1e-12));
}

TEST_CASE("scans are deterministic and independent of the thread count") {
    Experiment e;
    e.laser = LaserKind::vcsel_comb;
    RamanGrid g;
    g.points = 41;
    const auto x = raman_grid(e, g);
    e.threads = 1;
    const auto a = raman_scan(e, x);
    e.threads = 3;
    const auto b = raman_scan(e, x);
    CHECK(a.y == b.y);
}

TEST_CASE("Dicke narrowing switch adds the microwave Doppler rate") {
    Experiment e;
    const double base = e.relaxation();
    CHECK(base == e.ground_relaxation);
    e.dicke_narrowing = false;
    const auto d = VelocityDistribution::from_temperature(e.temperature, e.atom.mass, e.atom.wavelength);
    CHECK(e.relaxation() - base ==
          doctest::Approx(std::sqrt(std::log(2.0)) * e.atom.ground_hfs / phys::c * d.most_probable_speed));
}
