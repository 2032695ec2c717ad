#pragma once

#include "cptsim/constants.hpp"

namespace cpt {

/// Rates of the isolated 6-level system, all rad/s.
struct SixLevelParams {
    double W1 = 0.0;
    double W2 = 0.0;
    double W = 0.0;  ///< W1 + W2, the optical pumping rate
    double W12 = 0.0;
    double D12 = 0.0;
    double Delta = 0.0;  ///< light shift of the ground splitting
    double Gamma = 0.0;  ///< ground relaxation
    double Omega = 0.0;  ///< Raman detuning
    double gamma = mhz(5.6);
};

struct FRJ {
    double f = 0.0;  ///< rho_11 - rho_22
    double R = 0.0;  ///< Re rho_12
    double J = 0.0;  ///< Im rho_12
};

/// Rates from the per-level profiles. `v0` is |V^0| in rad/s (the
/// polarization weights of both legs already folded in).
SixLevelParams pump_rates(double G1, double G2, double F1, double F2, double v0, double gprime);

/// Stationary point of the (f, R, J) equations, by direct 3x3 solve.
/// Throws SolverError when Gamma + W is not positive.
FRJ frj_steady(const SixLevelParams& p);

/// (1/gamma) [W + (W1 - W2) f + 4 W12 R] for a given (f, R, J).
double rho_exc_from_frj(const SixLevelParams& p, const FRJ& s);

/// Closed-form stationary excited population; the last term carries the
/// Omega dependence.
double rho_exc_closed_form(const SixLevelParams& p);

/// FWHM in Omega of the Lorentzian CPT term, 2 sqrt((Gamma + W)^2 + 4 D12^2).
double cpt_term_width(const SixLevelParams& p);

}  // namespace cpt
