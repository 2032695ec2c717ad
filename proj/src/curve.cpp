#include "cptsim/curve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace cpt {

namespace {

struct Parabola {
    double a, b, c;
    double operator()(double x) const { return (a * x + b) * x + c; }
};

// Interpolating parabola through three points, in coordinates centred on x1
// to limit cancellation.
Parabola through(double x0, double z0, double x1, double z1, double x2, double z2, double shift) {
    x0 -= shift;
    x1 -= shift;
    x2 -= shift;
    const double d01 = (z1 - z0) / (x1 - x0);
    const double d12 = (z2 - z1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    const double b = d01 - a * (x0 + x1);
    const double c = z0 - (a * x0 + b) * x0;
    return {a, b, c};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Position in [xl, xr] where the resonance w(x) falls to `level`, with
// w(xl) < level <= w(xr) (or mirrored). Uses the samples k0 < k1 < k2 of w.
double crossing(const std::vector<double>& x, const std::vector<double>& w, std::size_t j, std::size_t k0,
                double level) {
    const double xl = x[j], xr = x[j + 1];
    const double lin = xl + (level - w[j]) * (xr - xl) / (w[j + 1] - w[j]);
    const std::size_t k1 = k0 + 1, k2 = k0 + 2;
    if (w[k0] <= 0.0 || w[k1] <= 0.0 || w[k2] <= 0.0) return lin;
    const double shift = x[k1];
    const Parabola p = through(x[k0], 1.0 / w[k0], x[k1], 1.0 / w[k1], x[k2], 1.0 / w[k2], shift);
    const double target = 1.0 / level;
    const double lo = std::min(xl, xr) - shift, hi = std::max(xl, xr) - shift;
    double root;
    if (std::abs(p.a) < 1e-300) {
        if (p.b == 0.0) return lin;
        root = (target - p.c) / p.b;
    } else {
        const double disc = p.b * p.b - 4.0 * p.a * (p.c - target);
        if (disc < 0.0) return lin;
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (p.b + std::copysign(sq, p.b));
        const double r1 = q / p.a;
        const double r2 = q != 0.0 ? (p.c - target) / q : r1;
        const double tol = 1e-9 * (hi - lo);
        if (r1 >= lo - tol && r1 <= hi + tol) root = r1;
        else if (r2 >= lo - tol && r2 <= hi + tol) root = r2;
        else return lin;
    }
    root = std::clamp(root, lo, hi);
    return root + shift;
}

}  // namespace

void ScanCurve::validate() const {
    if (x.size() != y.size()) throw std::invalid_argument("scan curve: x and y sizes differ");
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw std::invalid_argument("scan curve: non-finite value");
    if (x.size() < 2) return;
    const bool up = x[1] > x[0];
    for (std::size_t i = 1; i < x.size(); ++i)
        if ((x[i] > x[i - 1]) != up || x[i] == x[i - 1]) throw std::invalid_argument("scan curve: grid not strictly monotone");
}

ResonanceFeatures extract_features(const ScanCurve& curve, const FeatureOptions& options) {
    curve.validate();
    ResonanceFeatures out;
    const auto& x = curve.x;
    const std::size_t n = x.size();
    if (n < 5) return out;

    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.5 * options.outer_fraction * n)));
    std::vector<double> outer(curve.y.begin(), curve.y.begin() + static_cast<long>(k));
    outer.insert(outer.end(), curve.y.end() - static_cast<long>(k), curve.y.end());
    out.background = median(outer);

    std::vector<double> dev(n);
    double scale = 0.0;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        dev[i] = curve.y[i] - out.background;
        scale = std::max(scale, std::abs(curve.y[i]));
        if (std::abs(dev[i]) > std::abs(dev[imax])) imax = i;
    }
    const double floor = std::max(options.noise_floor, 1e-12 * scale);
    if (std::abs(dev[imax]) <= floor) return out;

    out.found = true;
    out.polarity = dev[imax] > 0.0 ? 1 : -1;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = out.polarity * dev[i];

    // Peak: vertex of the parabola through 1/w around the extreme sample.
    double peak = w[imax];
    out.center = x[imax];
    if (imax > 0 && imax + 1 < n && w[imax - 1] > 0.0 && w[imax + 1] > 0.0) {
        const double shift = x[imax];
        const Parabola p = through(x[imax - 1], 1.0 / w[imax - 1], x[imax], 1.0 / w[imax], x[imax + 1],
                                   1.0 / w[imax + 1], shift);
        if (p.a > 0.0) {
            const double xv = -p.b / (2.0 * p.a);
            const double zv = p(xv);
            const double lo = std::min(x[imax - 1], x[imax + 1]) - shift;
            const double hi = std::max(x[imax - 1], x[imax + 1]) - shift;
            if (zv > 0.0 && xv >= lo && xv <= hi) {
                peak = 1.0 / zv;
                out.center = xv + shift;
            }
        }
    }
    out.amplitude = peak;
    const double half = 0.5 * peak;

    std::optional<double> left, right;
    for (std::size_t i = imax; i > 0; --i) {
        if (w[i - 1] < half) {
            const std::size_t j = i - 1;
            const std::size_t k0 = j;
            left = crossing(x, w, j, std::min(k0, n - 3), half);
            break;
        }
    }
    for (std::size_t i = imax; i + 1 < n; ++i) {
        if (w[i + 1] < half) {
            const std::size_t j = i;
            const std::size_t k0 = j > 0 ? j - 1 : j;
            right = crossing(x, w, j, std::min(k0, n - 3), half);
            break;
        }
    }
    if (left && right) out.fwhm = std::abs(*right - *left);
    return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
        if (y[i] != 0.0) fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(r / y[i]));
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

}  // namespace cpt
