#pragma once

// Stationary (f, R, J) of the 6-level equations, solved symbolically
// (a = Gamma + W, y = Omega - Delta, dw = W1 - W2).

namespace oracle {

struct Frj {
    double f, R, J;
};

inline Frj frj_symbolic(double a, double y, double D, double dw, double W12) {
    const double den = 4.0 * D * D + a * a + y * y;
    return {-(4.0 * D * W12 * y + a * a * dw + dw * y * y) / (a * den),
            -(4.0 * D * D * W12 + D * dw * y + W12 * a * a) / (a * den),
            (-D * dw + W12 * y) / den};
}

}  // namespace oracle
