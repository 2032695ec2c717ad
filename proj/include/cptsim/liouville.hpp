#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cptsim/atomic.hpp"
#include "cptsim/spectral.hpp"

namespace cpt {

/// One laser component acting on one ground hyperfine manifold.
struct Drive {
    std::size_t component = 0;
    int ground_F = 1;
    /// Nearest-resonance component for its manifold; only coherent drives
    /// couple the two manifolds.
    bool coherent = false;
    Eigen::MatrixXcd rabi;                     ///< V_eg (rad/s), n_excited x n_ground
    std::vector<std::complex<double>> profile; ///< G_e + i F_e per excited sublevel
};

struct CoefficientOptions {
    double ground_relaxation = hz(750.0);  ///< Gamma, rad/s
    double assignment_cutoff = ghz(2.0);   ///< max one-photon detuning of a coherent drive
    bool off_resonant_pumping = true;      ///< keep drives outside the cutoff
    double dipole_scale = 1.0;             ///< multiplies the reduced dipole element
    Quadrature quadrature = Quadrature::automatic;
    /// Replaces the Doppler-averaged G + iF for (component, excited sublevel).
    std::function<std::complex<double>(std::size_t component, const Sublevel& excited)> profile_override;
};

class CoefficientSet {
public:
    std::size_t n_ground = 0;
    std::size_t n_excited = 0;
    std::vector<Drive> drives;
    std::optional<std::size_t> assigned_f1;  ///< index into drives
    std::optional<std::size_t> assigned_f2;
    std::vector<int> ground_F;               ///< F of each ground sublevel
    std::vector<double> zeeman;              ///< ground Zeeman shifts, rad/s
    double gprime = 0.0;                     ///< gamma', rad/s
    double gamma = 0.0;                      ///< excited decay rate, rad/s
    double ground_relaxation = 0.0;          ///< Gamma, rad/s
    double raman_detuning = 0.0;             ///< Omega, rad/s
    double component_mismatch = 0.0;         ///< (nu_1 - nu_2) - omega_gg of the coherent pair, rad/s
    std::size_t component_count = 0;

    /// Rotating-frame ground frequencies theta_g.
    Eigen::VectorXd theta;
    /// Pumping matrix K; the generator reads -K rho - rho K^dagger + ...
    Eigen::MatrixXcd K;
    /// Rows of K contributed by each drive (sum over drives equals K).
    std::vector<Eigen::MatrixXcd> drive_K;

    /// V_eg of one component (zero when the component does not couple g, e).
    std::complex<double> rabi(std::size_t g, std::size_t e, std::size_t component) const;

    void set_raman_detuning(double omega);
    /// Multiplies every Rabi frequency of component j by factors[j] and reassembles K.
    void scale_components(const std::vector<std::complex<double>>& factors);
    /// Recomputes theta and K from drives; call after editing drives by hand.
    void assemble();

private:
    std::vector<Eigen::MatrixXcd> intra_K;  // V_d^+ diag(P_d) V_d / gamma'
    std::vector<Eigen::MatrixXcd> cross_K;  // coherent-partner term
    std::vector<std::optional<std::size_t>> cross_partner;
};

/// Reduced dipole element d0 (C m) from the spontaneous decay rate.
double reduced_dipole(const AtomConstants& constants);

CoefficientSet build_coefficients(const AtomicSystem& system, const LaserSpectrum& spectrum,
                                  const BroadeningConfig& broadening, double field_ut, double raman_detuning,
                                  const CoefficientOptions& options = {});

/// Hermitian ground-state density matrix.
struct GroundDM {
    Eigen::MatrixXcd rho;

    double trace() const { return rho.trace().real(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double population(std::size_t g) const { return rho(g, g).real(); }
};

/// d rho / dt of the adiabatically eliminated ground-state master equation.
Eigen::MatrixXcd ground_rhs(const Eigen::MatrixXcd& rho, const CoefficientSet& coeffs);

/// Complex generator acting on vec(rho) (index g * n + g'), without the
/// constant relaxation source Gamma/n on the diagonal.
Eigen::MatrixXcd liouvillian(const CoefficientSet& coeffs);

struct SteadyStateOptions {
    std::size_t normalization_row = 0;  ///< which population equation is replaced by the trace
    double max_condition = 1e12;
};

/// Stationary point of ground_rhs with unit trace. Throws SolverError when
/// the condition number of the reduced real system exceeds the limit.
GroundDM steady_state(const CoefficientSet& coeffs, const SteadyStateOptions& options = {});

/// Total excited-state population. Throws InconsistencyError if the complex
/// sum carries an imaginary residue above 1e-10 of its magnitude.
double excited_population(const GroundDM& dm, const CoefficientSet& coeffs);

/// Per-component share of gamma * rho_exc (real part, rad/s); the imaginary
/// part is the matching dispersive response.
std::vector<std::complex<double>> component_rates(const GroundDM& dm, const CoefficientSet& coeffs);

/// rho_exc hbar omega gamma N_a, in W.
double absorbed_power(double rho_exc, double omega_opt, double gamma, double atom_count);

}  // namespace cpt
