#pragma once

// Faddeeva function w(z) for Im z > 0 from its Fourier representation
//   w(z) = pi^{-1/2} int_0^inf exp(-t^2/4 + i z t) dt,
// integrated on composite 20-point Gauss-Legendre panels.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline const std::array<std::pair<double, double>, 20>& legendre20() {
    static const auto nodes = [] {
        std::array<std::pair<double, double>, 20> out{};
        const int n = 20;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return out;
    }();
    return nodes;
}

inline std::complex<double> faddeeva(std::complex<double> z) {
    const double tmax = 14.0;  // exp(-49) below double resolution
    const double rate = std::max(1.0, std::abs(z.real()));
    const int panels = static_cast<int>(std::ceil(tmax * rate * 2.0)) + 40;
    const double h = tmax / panels;
    std::complex<double> sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (const auto& [x, w] : legendre20()) {
            const double t = mid + 0.5 * h * x;
            sum += 0.5 * h * w * std::exp(std::complex<double>(-0.25 * t * t, 0.0) + std::complex<double>(0.0, 1.0) * z * t);
        }
    }
    return sum / std::sqrt(std::numbers::pi);
}

// G + iF for Doppler width k v_p: sqrt(pi) b w(d + i b), b = gamma'/(k v_p), d = delta/(k v_p).
inline std::complex<double> doppler_profile(double delta, double gprime, double kvp) {
    const double b = gprime / kvp;
    return std::sqrt(std::numbers::pi) * b * faddeeva({delta / kvp, b});
}

}  // namespace oracle
