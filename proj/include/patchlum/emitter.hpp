#pragma once

// Bias-dependent intersubband emission line. The Stark shift is modelled as
// linear in bias, E_EL(V) = E0 + kappa (V - V0); the mesa line is a unit-peak
// Lorentzian of fixed width; spontaneous lifetime follows the (h w)^3 law.

#include <span>
#include <vector>

#include "patchlum/cavity.hpp"
#include "patchlum/quantities.hpp"

namespace patchlum {

struct StarkEmitter {
    Energy e0{Energy(130.0)};      // EL peak at the reference bias
    double v0_v{4.5};              // reference bias
    double kappa_mev_per_v{5.0};   // Stark slope
    double de_el_mev{130.0 / 9.0}; // mesa linewidth (FWHM), bias-independent
    Lifetime tau_sp_ref{Lifetime(50e-9)};  // spontaneous lifetime at e_ref
    Energy e_ref{Energy(130.0)};           // energy where tau_sp_ref applies
};

void validate(const StarkEmitter& emitter);

// E_EL(V) = E0 + kappa (V - V0); extrapolation beyond any measured range is
// permitted, callers flag it in output metadata.
Energy el_peak_energy(const StarkEmitter& emitter, double bias_v);

// E_EL(V) / dE_EL at the evaluation bias.
double el_quality_factor(const StarkEmitter& emitter, double bias_v);

// Unit-peak Lorentzian centered at E_EL(V) with FWHM dE_EL.
std::vector<double> mesa_spectrum(const StarkEmitter& emitter, double bias_v,
                                  std::span<const double> energy_grid_mev);

// tau_sp(E) = tau_ref (E_ref / E)^3.
Lifetime spontaneous_lifetime(Energy e, Energy e_ref, Lifetime tau_ref);

// E_EL(V) - E_cav in meV (signed).
double detuning_mev(const StarkEmitter& emitter, double bias_v, const CavityMode& mode);

// Bias at which detuning vanishes; requires kappa != 0.
double alignment_bias_v(const StarkEmitter& emitter, const CavityMode& mode);

// Measured bias -> device current table, strictly increasing in V, current
// non-decreasing. Queries interpolate linearly and stay within the table hull.
class BiasCurrentMap {
public:
    BiasCurrentMap(std::vector<double> bias_v, std::vector<double> current_ma);

    double current_ma(double bias_v) const;
    // Inverse lookup; requires strictly increasing current.
    double bias_v(double current_ma) const;

    double min_bias_v() const { return bias_.front(); }
    double max_bias_v() const { return bias_.back(); }
    double min_current_ma() const { return current_.front(); }
    double max_current_ma() const { return current_.back(); }

private:
    std::vector<double> bias_;
    std::vector<double> current_;
};

}  // namespace patchlum
