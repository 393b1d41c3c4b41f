#include "patchlum/spectra.hpp"

#include <algorithm>

#include "patchlum/peaks.hpp"
#include "patchlum/purcell.hpp"

namespace patchlum {

EmissionSpectrum filtered_spectrum(const StarkEmitter& emitter, double bias_v,
                                   const CavityMode& mode,
                                   std::span<const double> energy_grid_mev) {
    if (energy_grid_mev.size() < 3) {
        throw ValidationError("filtered_spectrum: grid too small");
    }
    const double e_el = el_peak_energy(emitter, bias_v).mev;

    EmissionSpectrum spectrum;
    spectrum.energy_mev.assign(energy_grid_mev.begin(), energy_grid_mev.end());
    spectrum.intensity.resize(energy_grid_mev.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < energy_grid_mev.size(); ++i) {
        const double e = energy_grid_mev[i];
        const double value = lorentzian(e - e_el, emitter.de_el_mev) *
                             lorentzian(e - mode.e_cav.mev, mode.de_cav.mev);
        spectrum.intensity[i] = value;
        peak = std::max(peak, value);
    }
    if (!(peak > 0.0)) {
        throw NumericalError("filtered_spectrum: spectrum vanished on the grid");
    }
    for (double& v : spectrum.intensity) v /= peak;

    const PeakAnalysis analysis =
        analyze_single_peak(spectrum.energy_mev, spectrum.intensity);
    spectrum.peak_mev = analysis.x_peak;
    spectrum.fwhm_mev = analysis.fwhm;
    spectrum.quality = analysis.x_peak / analysis.fwhm;
    return spectrum;
}

double spectrum_quality_factor(std::span<const double> energy_mev,
                               std::span<const double> intensity) {
    const PeakAnalysis analysis = analyze_single_peak(energy_mev, intensity);
    return analysis.x_peak / analysis.fwhm;
}

std::vector<double> energy_grid(double center_mev, double half_span_mev, std::size_t n) {
    if (n < 2 || !(half_span_mev > 0.0)) {
        throw ValidationError("energy_grid: needs n >= 2 and span > 0");
    }
    std::vector<double> grid(n);
    const double step = 2.0 * half_span_mev / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = center_mev - half_span_mev + step * static_cast<double>(i);
    }
    return grid;
}

}  // namespace patchlum
