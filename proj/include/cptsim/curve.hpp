#pragma once

#include <string>
#include <vector>

namespace cpt {

/// Sampled observable against a swept parameter.
struct ScanCurve {
    std::string parameter;  ///< e.g. "raman_hz"
    std::string unit;
    std::string observable;
    std::vector<double> x;  ///< strictly monotone
    std::vector<double> y;

    /// Throws std::invalid_argument if x is not strictly monotone or y is not finite.
    void validate() const;
};

struct ResonanceFeatures {
    bool found = false;
    double amplitude = 0.0;   ///< |peak - background|
    double fwhm = 0.0;        ///< in x units, 0 when not found
    double center = 0.0;      ///< in x units
    double background = 0.0;
    int polarity = 0;         ///< +1 peak, -1 dip
};

struct FeatureOptions {
    double outer_fraction = 0.1;  ///< share of samples (both ends together) used for the background
    double noise_floor = 0.0;     ///< deviations at or below this are "no resonance"
};

/// Background from the median of the outer samples, extremum of |y - background|,
/// half-maximum crossings. Peak and crossings are interpolated on 1/(y - background),
/// which is exactly quadratic for a Lorentzian.
ResonanceFeatures extract_features(const ScanCurve& curve, const FeatureOptions& options = {});

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double max_relative_residual = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cpt
