#pragma once

// Single-peak profile analysis shared by the spectral and far-field code:
// peak location and FWHM by linear interpolation at half maximum.

#include <span>

#include "patchlum/errors.hpp"

namespace patchlum {

struct PeakAnalysis {
    double x_peak{};
    double y_peak{};
    double fwhm{};
};

// Requires a strictly increasing x grid and a profile with one interior peak:
// the half-maximum level must be crossed exactly twice. Throws NumericalError
// for flat, multimodal or boundary-peaked profiles.
PeakAnalysis analyze_single_peak(std::span<const double> x, std::span<const double> y);

}  // namespace patchlum
