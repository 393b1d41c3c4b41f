#include "patchlum/peaks.hpp"

#include <algorithm>
#include <cmath>

namespace patchlum {

PeakAnalysis analyze_single_peak(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw ValidationError("analyze_single_peak: needs >= 3 samples of equal length");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw ValidationError("analyze_single_peak: grid must be strictly increasing");
        }
    }
    const auto it = std::max_element(y.begin(), y.end());
    const double y_max = *it;
    if (!(y_max > 0.0)) {
        throw NumericalError("analyze_single_peak: profile has no positive maximum");
    }
    const std::size_t i_max = static_cast<std::size_t>(it - y.begin());
    if (i_max == 0 || i_max == y.size() - 1) {
        throw NumericalError("analyze_single_peak: maximum sits on the grid boundary");
    }

    const double half = 0.5 * y_max;
    // Count upward/downward crossings of the half level; a clean single peak
    // crosses exactly once on each flank.
    double x_left = 0.0, x_right = 0.0;
    int n_up = 0, n_down = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const bool below_prev = y[i - 1] < half;
        const bool below_here = y[i] < half;
        if (below_prev && !below_here) {
            ++n_up;
            const double t = (half - y[i - 1]) / (y[i] - y[i - 1]);
            x_left = x[i - 1] + t * (x[i] - x[i - 1]);
        } else if (!below_prev && below_here) {
            ++n_down;
            const double t = (y[i - 1] - half) / (y[i - 1] - y[i]);
            x_right = x[i - 1] + t * (x[i] - x[i - 1]);
        }
    }
    if (n_up != 1 || n_down != 1) {
        throw NumericalError(
            "analyze_single_peak: profile is multimodal or does not fall to half maximum");
    }

    // Parabolic refinement of the peak abscissa through the three top samples.
    const double x0 = x[i_max - 1], x1 = x[i_max], x2 = x[i_max + 1];
    const double y0 = y[i_max - 1], y1 = y[i_max], y2 = y[i_max + 1];
    double x_peak = x1;
    const double denom = (y0 - 2.0 * y1 + y2);
    if (denom < 0.0) {
        x_peak = x1 + 0.5 * (x2 - x0) / 2.0 * (y0 - y2) / denom;
        x_peak = std::clamp(x_peak, x0, x2);
    }
    return {x_peak, y_max, x_right - x_left};
}

}  // namespace patchlum
