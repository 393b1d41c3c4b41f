#include "patchlum/cavity.hpp"

#include "patchlum/purcell.hpp"

namespace patchlum {

void validate(const PatchCavity& cavity) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0)) {
            throw ValidationError(std::string("cavity.") + field + ": must be > 0");
        }
    };
    positive(cavity.s_um, "s_um");
    positive(cavity.h_um, "H_um");
    positive(cavity.p_um, "p_um");
    positive(cavity.q_cav, "Q_cav");
    if (cavity.nx < 1) throw ValidationError("cavity.Nx: must be >= 1");
    if (cavity.ny < 1) throw ValidationError("cavity.Ny: must be >= 1");
    if (!(cavity.n_mode > 1.0)) {
        throw ValidationError("cavity.n_mode: must be > 1");
    }
    if (!(cavity.s_um < cavity.p_um)) {
        throw ValidationError("cavity.s_um: patches overlap (requires s < p)");
    }
}

Resonance resonance(double s_um, double n_mode) {
    if (!(s_um > 0.0)) throw ValidationError("resonance: s must be > 0");
    if (!(n_mode > 0.0)) throw ValidationError("resonance: n_mode must be > 0");
    Wavelength lambda(2.0 * n_mode * s_um);
    return {wavelength_to_energy(lambda), lambda};
}

double mode_index_from_resonance(double s_um, Wavelength lambda) {
    if (!(s_um > 0.0)) throw ValidationError("mode_index_from_resonance: s must be > 0");
    if (!(lambda.um > 0.0)) {
        throw ValidationError("mode_index_from_resonance: lambda must be > 0");
    }
    return lambda.um / (2.0 * s_um);
}

double mode_volume_um3(double s_um, double h_um) {
    if (!(s_um > 0.0) || !(h_um > 0.0)) {
        throw ValidationError("mode_volume: dimensions must be > 0");
    }
    return s_um * s_um * h_um;
}

CavityMode cavity_mode(const PatchCavity& cavity) {
    validate(cavity);
    const Resonance res = resonance(cavity.s_um, cavity.n_mode);
    CavityMode mode;
    mode.e_cav = res.e_cav;
    mode.lambda_cav = res.lambda_cav;
    mode.q_cav = cavity.q_cav;
    mode.de_cav = Energy(res.e_cav.mev / cavity.q_cav);
    mode.v_cav_um3 = mode_volume_um3(cavity.s_um, cavity.h_um);
    mode.n_mode = cavity.n_mode;
    return mode;
}

double electrical_area_um2(const PatchCavity& cavity) {
    return static_cast<double>(cavity.nx) * cavity.ny * cavity.s_um * cavity.s_um;
}

double optical_area_um2(const PatchCavity& cavity) {
    return static_cast<double>(cavity.nx) * cavity.ny * cavity.p_um * cavity.p_um;
}

double fill_factor(const PatchCavity& cavity) {
    return (cavity.s_um * cavity.s_um) / (cavity.p_um * cavity.p_um);
}

namespace {
constexpr double um2_to_cm2 = 1e-8;
}

CurrentDensity current_to_density(double current_a, const PatchCavity& cavity) {
    if (!(current_a >= 0.0)) {
        throw ValidationError("current_to_density: current must be >= 0");
    }
    return CurrentDensity(current_a / (electrical_area_um2(cavity) * um2_to_cm2));
}

double density_to_current_a(CurrentDensity j, const PatchCavity& cavity) {
    return j.a_cm2 * electrical_area_um2(cavity) * um2_to_cm2;
}

std::vector<double> reflectivity_spectrum(const CavityMode& mode, double depth,
                                          std::span<const double> energy_grid_mev) {
    if (!(depth >= 0.0 && depth <= 1.0)) {
        throw ValidationError("reflectivity_spectrum: depth must be in [0, 1]");
    }
    std::vector<double> r(energy_grid_mev.size());
    for (std::size_t i = 0; i < energy_grid_mev.size(); ++i) {
        const double delta = energy_grid_mev[i] - mode.e_cav.mev;
        r[i] = 1.0 - depth * lorentzian(delta, mode.de_cav.mev);
    }
    return r;
}

}  // namespace patchlum
