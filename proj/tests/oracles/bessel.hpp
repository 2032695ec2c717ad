#pragma once

// J_n(x) from its power series; adequate for |x| < 10 and n < 30.

#include <cmath>

namespace oracle {

inline double bessel_j(int n, double x) {
    if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(-n, x);
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= 0.5L * x / k;
    long double sum = term;
    const long double q = -0.25L * x * x;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

}  // namespace oracle
