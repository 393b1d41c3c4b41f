#pragma once

// Cavity-filtered electroluminescence: the in-cavity spectrum is modelled as
// the pointwise product of the mesa Lorentzian and the cavity Lorentzian,
// renormalized to unit peak. Reproduces the factor-2 narrowing of the line.

#include <span>
#include <vector>

#include "patchlum/cavity.hpp"
#include "patchlum/emitter.hpp"

namespace patchlum {

struct EmissionSpectrum {
    std::vector<double> energy_mev;
    std::vector<double> intensity;  // unit peak
    double peak_mev{};
    double fwhm_mev{};
    double quality{};  // peak / FWHM
};

// Product filter; the grid should span >= +-10 combined linewidths with
// >= 2000 points for a reliable FWHM extraction.
EmissionSpectrum filtered_spectrum(const StarkEmitter& emitter, double bias_v,
                                   const CavityMode& mode,
                                   std::span<const double> energy_grid_mev);

// Peak energy / FWHM, half-max crossings by linear interpolation. Throws
// NumericalError on multimodal input.
double spectrum_quality_factor(std::span<const double> energy_mev,
                               std::span<const double> intensity);

// Convenience grid builder: [center - span, center + span] with n points.
std::vector<double> energy_grid(double center_mev, double half_span_mev, std::size_t n);

}  // namespace patchlum
