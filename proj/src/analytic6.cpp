#include "cptsim/analytic6.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "cptsim/errors.hpp"

namespace cpt {

SixLevelParams pump_rates(double G1, double G2, double F1, double F2, double v0, double gprime) {
    const double s = v0 * v0 / gprime;
    const double r3 = std::sqrt(3.0);
    SixLevelParams p;
    p.W1 = s * (G1 / 12.0 + 7.0 * G2 / 12.0);
    p.W2 = s * (3.0 * G1 / 12.0 + 5.0 * G2 / 12.0);
    p.W = p.W1 + p.W2;
    p.W12 = s * (G2 - G1) / (4.0 * r3);
    p.D12 = s * (F2 - F1) / (4.0 * r3);
    p.Delta = s * (F1 - F2) / 6.0;
    return p;
}

FRJ frj_steady(const SixLevelParams& p) {
    const double a = p.Gamma + p.W;
    if (!(a > 0.0)) throw SolverError("Gamma + W must be positive", INFINITY);
    const double y = p.Omega - p.Delta;
    Eigen::Matrix3d A;
    A << -a, 0.0, -4.0 * p.D12,
         0.0, -a, y,
         p.D12, -y, -a;
    const Eigen::Vector3d b(p.W1 - p.W2, p.W12, 0.0);
    const Eigen::Vector3d x = A.partialPivLu().solve(b);
    return {x(0), x(1), x(2)};
}

double rho_exc_from_frj(const SixLevelParams& p, const FRJ& s) {
    return (p.W + (p.W1 - p.W2) * s.f + 4.0 * p.W12 * s.R) / p.gamma;
}

double rho_exc_closed_form(const SixLevelParams& p) {
    const double a = p.Gamma + p.W;
    const double y = p.Omega - p.Delta;
    const double dw = p.W1 - p.W2;
    const double num = p.D12 * dw - p.W12 * y;
    return (p.W - (dw * dw + 4.0 * p.W12 * p.W12) / a +
            4.0 * num * num / (a * (a * a + 4.0 * p.D12 * p.D12 + y * y))) /
           p.gamma;
}

double cpt_term_width(const SixLevelParams& p) {
    const double a = p.Gamma + p.W;
    return 2.0 * std::sqrt(a * a + 4.0 * p.D12 * p.D12);
}

}  // namespace cpt
