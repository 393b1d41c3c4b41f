#include "patchlum/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "patchlum/parallel.hpp"
#include "patchlum/peaks.hpp"

namespace patchlum {

namespace {

using constants::pi;

// sin(n x)/sin(x), continued through the removable singularities at x = k pi.
double dirichlet_ratio(double x, int n) {
    const double s = std::sin(x);
    if (std::abs(s) > 1e-8) return std::sin(n * x) / s;
    const double k = std::round(x / pi);
    const double r = x - k * pi;
    // sin(n(k pi + r)) / sin(k pi + r) = (-1)^{k(n-1)} sin(nr)/sin(r)
    const double sign =
        (static_cast<long long>(k) * (n - 1)) % 2 == 0 ? 1.0 : -1.0;
    if (r == 0.0) return sign * n;
    return sign * std::sin(n * r) / std::sin(r);
}

// |sum_m exp(i psi m)| over n centered elements; even in psi.
double axis_factor(double psi, int n) {
    return std::abs(dirichlet_ratio(0.5 * std::abs(psi), n));
}

double element_intensity(ElementPattern pattern, double cos2_theta) {
    switch (pattern) {
        case ElementPattern::isotropic:
            return 1.0;
        case ElementPattern::cosine:
            return cos2_theta;  // |cos(theta)|^2 amplitude taper
    }
    return 1.0;
}

}  // namespace

ElementPattern element_pattern_from_string(const std::string& name) {
    if (name == "isotropic") return ElementPattern::isotropic;
    if (name == "cosine") return ElementPattern::cosine;
    throw ValidationError("farfield.element_pattern: unknown pattern '" + name +
                          "' (expected isotropic|cosine)");
}

std::string to_string(ElementPattern pattern) {
    return pattern == ElementPattern::isotropic ? "isotropic" : "cosine";
}

void validate(const ArrayGeometry& geometry) {
    if (geometry.nx < 1) throw ValidationError("farfield.Nx: must be >= 1");
    if (geometry.ny < 1) throw ValidationError("farfield.Ny: must be >= 1");
    if (!(geometry.pitch_um > 0.0)) throw ValidationError("farfield.p_um: must be > 0");
    if (!(geometry.lambda_um > 0.0)) {
        throw ValidationError("farfield.lambda_um: must be > 0");
    }
    if (!(geometry.coherence_scale > 0.0)) {
        throw ValidationError("farfield.coherence_scale: must be > 0");
    }
}

std::complex<double> array_factor(const ArrayGeometry& geometry, double u, double v) {
    validate(geometry);
    if (u * u + v * v > 1.0 + 1e-12) {
        throw ValidationError("array_factor: direction cosines must satisfy u^2+v^2 <= 1");
    }
    const double pitch = geometry.pitch_um * geometry.coherence_scale;
    const double phase_u = 2.0 * pi / geometry.lambda_um * pitch * u;
    const double phase_v = 2.0 * pi / geometry.lambda_um * pitch * v;
    auto axis_sum = [](double phase, int n) {
        std::complex<double> sum{0.0, 0.0};
        const double offset = 0.5 * (n - 1);
        for (int k = 0; k < n; ++k) {
            const double m = static_cast<double>(k) - offset;
            sum += std::polar(1.0, phase * m);
        }
        return sum;
    };
    return axis_sum(phase_u, geometry.nx) * axis_sum(phase_v, geometry.ny);
}

double radiated_intensity(const ArrayGeometry& geometry, double u, double v) {
    const double cos2 = 1.0 - u * u - v * v;
    if (cos2 < -1e-12) {
        throw ValidationError("radiated_intensity: u^2+v^2 must be <= 1");
    }
    const double pitch = geometry.pitch_um * geometry.coherence_scale;
    const double psi_u = 2.0 * pi / geometry.lambda_um * pitch * u;
    const double psi_v = 2.0 * pi / geometry.lambda_um * pitch * v;
    const double af = axis_factor(psi_u, geometry.nx) * axis_factor(psi_v, geometry.ny);
    return af * af * element_intensity(geometry.element, std::max(cos2, 0.0));
}

FarFieldMap intensity_map(const ArrayGeometry& geometry, double z_mm,
                          double extent_mm, double step_mm) {
    validate(geometry);
    if (!(z_mm > 0.0) || !(extent_mm > 0.0) || !(step_mm > 0.0) || step_mm > extent_mm) {
        throw ValidationError("intensity_map: needs z, extent, step > 0 and step <= extent");
    }

    FarFieldMap map;
    map.z_mm = z_mm;
    const double aperture_mm =
        std::max(geometry.nx, geometry.ny) * geometry.pitch_um * geometry.coherence_scale * 1e-3;
    // Fraunhofer criterion z >= 2 D^2 / lambda.
    map.farfield_ok = z_mm >= 2.0 * aperture_mm * aperture_mm / (geometry.lambda_um * 1e-3);

    const auto half = static_cast<std::size_t>(std::floor(extent_mm / step_mm));
    const std::size_t n = 2 * half + 1;  // symmetric grid through 0
    map.x_mm.resize(n);
    map.y_mm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = (static_cast<double>(i) - static_cast<double>(half)) * step_mm;
        map.x_mm[i] = offset;
        map.y_mm[i] = offset;
    }

    map.intensity.resize(n * n);
    parallel_for(n, [&](std::size_t iy) {
        const double y = map.y_mm[iy];
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = map.x_mm[ix];
            const double r = std::sqrt(x * x + y * y + z_mm * z_mm);
            map.intensity[iy * n + ix] = radiated_intensity(geometry, x / r, y / r);
        }
    });

    const auto it = std::max_element(map.intensity.begin(), map.intensity.end());
    const double peak = *it;
    if (!(peak > 0.0)) {
        throw NumericalError("intensity_map: intensity vanished on the grid");
    }
    const std::size_t i_peak = static_cast<std::size_t>(it - map.intensity.begin());
    const std::size_t iy_peak = i_peak / n;
    const std::size_t ix_peak = i_peak % n;
    if (ix_peak == 0 || ix_peak == n - 1 || iy_peak == 0 || iy_peak == n - 1) {
        throw NumericalError("intensity_map: main lobe falls on the grid boundary");
    }
    for (double& value : map.intensity) value /= peak;

    // Cross-sectional profiles through the beam center.
    std::vector<double> profile_x(n), profile_y(n);
    for (std::size_t ix = 0; ix < n; ++ix) profile_x[ix] = map.intensity[iy_peak * n + ix];
    for (std::size_t iy = 0; iy < n; ++iy) profile_y[iy] = map.intensity[iy * n + ix_peak];
    map.dx_fwhm_mm = fwhm(map.x_mm, profile_x);
    map.dy_fwhm_mm = fwhm(map.y_mm, profile_y);
    map.theta_div_x_deg = divergence_deg(map.dx_fwhm_mm, z_mm);
    map.theta_div_y_deg = divergence_deg(map.dy_fwhm_mm, z_mm);
    return map;
}

double fwhm(std::span<const double> x, std::span<const double> y) {
    return analyze_single_peak(x, y).fwhm;
}

double divergence_deg(double width_mm, double z_mm) {
    if (!(width_mm > 0.0) || !(z_mm > 0.0)) {
        throw ValidationError("divergence: width and distance must be > 0");
    }
    return 2.0 * std::atan(0.5 * width_mm / z_mm) * 180.0 / pi;
}

double directivity(const ArrayGeometry& geometry, double rel_tol) {
    validate(geometry);
    if (!(rel_tol > 0.0)) throw ValidationError("directivity: rel_tol must be > 0");

    const double peak = radiated_intensity(geometry, 0.0, 0.0);
    double previous = 0.0;
    for (std::size_t n_theta = 64; n_theta <= 8192; n_theta *= 2) {
        const std::size_t n_phi = 2 * n_theta;
        const double h_theta = 0.5 * pi / static_cast<double>(n_theta);
        const double h_phi = 2.0 * pi / static_cast<double>(n_phi);

        // Simpson in theta, periodic trapezoid in phi; per-row sums are
        // reduced sequentially for a deterministic result.
        std::vector<double> row(n_theta + 1);
        parallel_for(n_theta + 1, [&](std::size_t i) {
            const double theta = h_theta * static_cast<double>(i);
            const double sin_t = std::sin(theta);
            double sum = 0.0;
            for (std::size_t j = 0; j < n_phi; ++j) {
                const double phi = h_phi * static_cast<double>(j);
                sum += radiated_intensity(geometry, sin_t * std::cos(phi),
                                          sin_t * std::sin(phi));
            }
            row[i] = sum * h_phi * sin_t;
        });
        double integral = row[0] + row[n_theta];
        for (std::size_t i = 1; i < n_theta; ++i) {
            integral += row[i] * (i % 2 == 1 ? 4.0 : 2.0);
        }
        integral *= h_theta / 3.0;

        const double total = 2.0 * integral;  // mirror symmetry about the array plane
        const double value = 4.0 * pi * peak / total;
        if (previous > 0.0 && std::abs(value - previous) <= rel_tol * value) {
            return value;
        }
        previous = value;
    }
    throw NumericalError("directivity: quadrature did not converge");
}

}  // namespace patchlum
