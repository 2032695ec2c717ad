#include "cptsim/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cptsim/errors.hpp"

namespace cpt {

namespace {

constexpr int kHermiteNodes = 64;
constexpr double kTailCut = 9.0;  // exp(-81) is below double precision
constexpr double kAdaptiveTol = 1e-12;

struct HermiteRule {
    std::array<double, kHermiteNodes> nodes{};
    std::array<double, kHermiteNodes> weights{};  // normalized to sum 1
};

// Golub-Welsch for the weight exp(-t^2).
const HermiteRule& hermite_rule() {
    static const HermiteRule rule = [] {
        Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(kHermiteNodes, kHermiteNodes);
        for (int k = 1; k < kHermiteNodes; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
        HermiteRule r;
        for (int i = 0; i < kHermiteNodes; ++i) {
            r.nodes[i] = eig.eigenvalues()(i);
            const double v0 = eig.eigenvectors()(0, i);
            r.weights[i] = v0 * v0;
        }
        return r;
    }();
    return rule;
}

// Integrand in the reduced variable t = v / v_p, Gaussian weight included.
std::complex<double> profile(double u, double b, double t) {
    const double x = u - t;
    return std::exp(-t * t) / std::sqrt(pi) * b * std::complex<double>(b, x) / (b * b + x * x);
}

std::complex<double> gf_hermite(double u, double b) {
    const auto& rule = hermite_rule();
    std::complex<double> sum = 0.0;
    for (int i = 0; i < kHermiteNodes; ++i) {
        const double x = u - rule.nodes[i];
        sum += rule.weights[i] * b * std::complex<double>(b, x) / (b * b + x * x);
    }
    return sum;
}

std::complex<double> gf_adaptive(double u, double b) {
    using boost::math::quadrature::gauss_kronrod;
    // Panel edges crowd around the Lorentzian centre so every panel sees a
    // smooth integrand.
    std::vector<double> edges{-kTailCut, kTailCut};
    for (double s : {0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0, 64.0, -64.0}) {
        const double p = u + s * b;
        if (p > -kTailCut && p < kTailCut) edges.push_back(p);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    double re = 0.0, im = 0.0, err_re = 0.0, err_im = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double e = 0.0, l = 0.0;
        re += gauss_kronrod<double, 61>::integrate([&](double t) { return profile(u, b, t).real(); },
                                                   edges[i], edges[i + 1], 20, kAdaptiveTol, &e, &l);
        err_re += e;
        l1 += l;
        im += gauss_kronrod<double, 61>::integrate([&](double t) { return profile(u, b, t).imag(); },
                                                   edges[i], edges[i + 1], 20, kAdaptiveTol, &e, &l);
        err_im += e;
    }
    const double scale = std::max(std::abs(std::complex<double>(re, im)), 1e-300);
    if (err_re + err_im > 1e-10 * std::max(scale, 1e-3 * l1)) {
        std::ostringstream os;
        os << "G/F quadrature did not converge (u=" << u << ", b=" << b << ", error " << err_re + err_im << ")";
        throw NumericalError(os.str());
    }
    return {re, im};
}

}  // namespace

double gamma_prime(const BroadeningConfig& cfg) {
    return 0.5 * (cfg.gamma_sp + cfg.gamma_c + cfg.laser_linewidth);
}

double doppler_fwhm(double temperature, double mass, double wavelength) {
    return VelocityDistribution::from_temperature(temperature, mass, wavelength).doppler_fwhm();
}

PressureEffects pressure_effects(double pressure_kpa, double broadening_per_kpa, double shift_per_kpa) {
    return {pressure_kpa * broadening_per_kpa, pressure_kpa * shift_per_kpa};
}

VelocityDistribution VelocityDistribution::from_temperature(double temperature, double mass, double wavelength) {
    return {std::sqrt(2.0 * phys::k_boltzmann * temperature / mass), two_pi / wavelength};
}

VelocityDistribution VelocityDistribution::from_doppler_fwhm(double fwhm, double wavevector) {
    return {fwhm / (2.0 * std::sqrt(std::log(2.0)) * wavevector), wavevector};
}

double VelocityDistribution::doppler_fwhm() const { return 2.0 * std::sqrt(std::log(2.0)) * kvp(); }

double VelocityDistribution::density(double v) const {
    const double t = v / most_probable_speed;
    return std::exp(-t * t) / (std::sqrt(pi) * most_probable_speed);
}

std::complex<double> gf_coefficients(double delta, double gprime, const VelocityDistribution& dist,
                                     Quadrature method) {
    if (!(gprime > 0.0)) throw NumericalError("gamma' must be positive");
    const double kvp = dist.kvp();
    if (kvp <= 0.0) {
        // no Doppler motion: bare Lorentzian
        return gprime * std::complex<double>(gprime, delta) / (gprime * gprime + delta * delta);
    }
    const double u = delta / kvp;
    const double b = gprime / kvp;
    if (method == Quadrature::automatic) method = b >= hermite_threshold ? Quadrature::gauss_hermite : Quadrature::adaptive;
    return method == Quadrature::gauss_hermite ? gf_hermite(u, b) : gf_adaptive(u, b);
}

double g_coefficient(double delta, double gprime, const VelocityDistribution& dist, Quadrature method) {
    return gf_coefficients(delta, gprime, dist, method).real();
}

double f_coefficient(double delta, double gprime, const VelocityDistribution& dist, Quadrature method) {
    return gf_coefficients(delta, gprime, dist, method).imag();
}

PolarizationWeights PolarizationWeights::linear() {
    const double h = 1.0 / std::sqrt(2.0);
    return {{h, 0.0}, {0.0, 0.0}, {h, 0.0}};
}

PolarizationWeights PolarizationWeights::circular_plus() { return {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}; }
PolarizationWeights PolarizationWeights::circular_minus() { return {{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}; }

std::complex<double> PolarizationWeights::operator[](int q) const {
    return q > 0 ? sigma_plus : (q < 0 ? sigma_minus : pi);
}

double PolarizationWeights::norm_squared() const {
    return std::norm(sigma_plus) + std::norm(pi) + std::norm(sigma_minus);
}

double LaserComponent::intensity() const { return 0.5 * phys::epsilon0 * phys::c * amplitude * amplitude; }

double LaserSpectrum::total_intensity() const {
    double sum = 0.0;
    for (const auto& c : components) sum += c.intensity();
    return sum;
}

double field_amplitude(double intensity) { return std::sqrt(2.0 * intensity / (phys::epsilon0 * phys::c)); }

LaserSpectrum dichromatic_pair(double intensity_per_component, double separation, double linewidth,
                               double carrier_detuning, PolarizationWeights polarization) {
    const double e = field_amplitude(intensity_per_component);
    LaserSpectrum s;
    s.linewidth = linewidth;
    s.components.push_back({carrier_detuning, e, 0.0, polarization});
    s.components.push_back({carrier_detuning - separation, e, 0.0, polarization});
    return s;
}

LaserSpectrum fm_comb(double total_intensity, double beta, double rf, int order, double linewidth,
                      double carrier_detuning, PolarizationWeights polarization) {
    LaserSpectrum s;
    s.linewidth = linewidth;
    const double e0 = field_amplitude(total_intensity);
    double captured = 0.0;
    for (int n = -order; n <= order; ++n) {
        const double jn = n < 0 ? ((-n) % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(-n, beta) : std::cyl_bessel_j(n, beta);
        captured += jn * jn;
        if (jn == 0.0) continue;
        s.components.push_back({carrier_detuning + n * rf, e0 * std::abs(jn), jn < 0.0 ? pi : 0.0, polarization});
    }
    s.captured_fraction = captured;
    if (captured < 0.99) {
        std::ostringstream os;
        os << "FM comb truncated at order " << order << " keeps only " << 100.0 * captured << "% of the power";
        s.warnings.push_back(os.str());
    }
    return s;
}

}  // namespace cpt
