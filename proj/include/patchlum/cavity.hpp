#pragma once

// Patch-antenna microcavity: geometry, fundamental-mode resonance (2ns = lambda),
// quality factor, mode volume, electrical/optical areas and a Lorentzian model
// of the reflectivity dip seen in FTIR spectra.

#include <span>
#include <vector>

#include "patchlum/quantities.hpp"

namespace patchlum {

struct PatchCavity {
    double s_um{1.4};     // patch lateral size
    double h_um{0.75};    // semiconductor thickness
    double p_um{7.0};     // array period
    int nx{10};           // patches per side, x
    int ny{10};           // patches per side, y
    double n_mode{3.5714};  // modal refractive index
    double q_cav{14.4};     // cavity quality factor
};

// Throws ValidationError naming the offending field (e.g. "cavity.s_um").
void validate(const PatchCavity& cavity);

struct CavityMode {
    Energy e_cav;           // resonance energy
    Wavelength lambda_cav;  // resonance wavelength, = 2 n s
    double q_cav{};
    Energy de_cav;          // linewidth, E_cav / Q_cav
    double v_cav_um3{};     // mode volume, s^2 H
    double n_mode{};        // modal index carried along for Purcell math
};

struct Resonance {
    Energy e_cav;
    Wavelength lambda_cav;
};

// lambda_cav = 2 n s.
Resonance resonance(double s_um, double n_mode);

// Inverts 2ns = lambda for the modal index.
double mode_index_from_resonance(double s_um, Wavelength lambda);

// Physical metal-metal volume s^2 H, no effective-volume correction.
double mode_volume_um3(double s_um, double h_um);

// Full derived mode for a validated cavity.
CavityMode cavity_mode(const PatchCavity& cavity);

// sigma = Nx Ny s^2 (electrical), Sigma = Nx Ny p^2 (optical collection).
double electrical_area_um2(const PatchCavity& cavity);
double optical_area_um2(const PatchCavity& cavity);
double fill_factor(const PatchCavity& cavity);  // s^2 / p^2

// J = I / sigma with sigma converted to cm^2.
CurrentDensity current_to_density(double current_a, const PatchCavity& cavity);
double density_to_current_a(CurrentDensity j, const PatchCavity& cavity);

// R(E) = 1 - depth * L(E - E_cav, dE_cav); unit-depth dip reaches zero on resonance.
std::vector<double> reflectivity_spectrum(const CavityMode& mode, double depth,
                                          std::span<const double> energy_grid_mev);

}  // namespace patchlum
