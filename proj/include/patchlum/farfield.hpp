#pragma once

// Far-field radiation of the uniform-phase N x N patch array: array factor,
// detection-plane intensity maps, profile FWHM, divergence and directivity.
// The array is phase-locked (all elements driven with equal phase), so the
// main lobe sits at broadside.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "patchlum/quantities.hpp"

namespace patchlum {

enum class ElementPattern { isotropic, cosine };

ElementPattern element_pattern_from_string(const std::string& name);
std::string to_string(ElementPattern pattern);

struct ArrayGeometry {
    int nx{20};
    int ny{20};
    double pitch_um{7.0};
    double lambda_um{10.0};
    ElementPattern element{ElementPattern::cosine};
    // Multiplier on the effective element spacing, for exploring coherence
    // lengths beyond the physical aperture. 1.0 = physical array.
    double coherence_scale{1.0};
};

void validate(const ArrayGeometry& geometry);

// Sum over centered element positions of exp(i 2 pi / lambda * p (m u + n v)),
// unit amplitudes; |AF(0,0)| = Nx Ny. Requires u^2 + v^2 <= 1.
std::complex<double> array_factor(const ArrayGeometry& geometry, double u, double v);

// |AF|^2 |element|^2 at direction cosines (u, v), not normalized.
double radiated_intensity(const ArrayGeometry& geometry, double u, double v);

struct FarFieldMap {
    double z_mm{};
    std::vector<double> x_mm;       // nx grid axis
    std::vector<double> y_mm;       // ny grid axis
    std::vector<double> intensity;  // row-major [iy * x_mm.size() + ix], unit max
    double dx_fwhm_mm{};
    double dy_fwhm_mm{};
    double theta_div_x_deg{};
    double theta_div_y_deg{};
    bool farfield_ok{};  // Fraunhofer criterion z >= 2 D^2 / lambda
};

// Samples the detection plane at distance z on a symmetric grid
// [-extent, extent] with the given step; direction cosines are exact
// (u = x / sqrt(x^2 + y^2 + z^2)). Throws NumericalError when the main lobe
// falls on the grid boundary.
FarFieldMap intensity_map(const ArrayGeometry& geometry, double z_mm,
                          double extent_mm, double step_mm);

// Half-maximum width of a single-peaked profile, linear interpolation on
// both flanks.
double fwhm(std::span<const double> x, std::span<const double> y);

// theta = 2 atan(width / (2 z)), in degrees.
double divergence_deg(double width_mm, double z_mm);

// 4 pi max / integral of the intensity over the full sphere (the pattern is
// mirror-symmetric about the array plane, so the quadrature runs over the
// visible hemisphere and doubles). Grid refinement until the relative change
// is below rel_tol.
double directivity(const ArrayGeometry& geometry, double rel_tol = 1e-3);

}  // namespace patchlum
