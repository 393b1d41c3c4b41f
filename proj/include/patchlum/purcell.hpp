#pragma once

// Purcell enhancement: the zero-detuning coefficient
// F_P = 3 Q (lambda/n)^3 / (4 pi^2 V_cav), the detuning Lorentzian
// L = dE^2 / (4 d^2 + dE^2), and their product, the Purcell factor.
// Q is the harmonic sum of Q_EL and Q_cav while dE is the arithmetic sum of
// the two linewidths; both conventions are intentional.

#include <functional>

#include "patchlum/cavity.hpp"
#include "patchlum/emitter.hpp"
#include "patchlum/quantities.hpp"

namespace patchlum {

// (1/Q_EL + 1/Q_cav)^-1.
double combined_quality_factor(double q_el, double q_cav);

// dE = dE_EL + dE_cav.
double total_linewidth_mev(double de_el_mev, double de_cav_mev);

// Unit peak at zero detuning, value 1/2 at |detuning| = dE/2.
double lorentzian(double detuning_mev, double linewidth_mev);

// F_P = 3 Q (lambda_cav/n)^3 / (4 pi^2 V_cav).
double purcell_coefficient(double q, Wavelength lambda_cav, double n_mode,
                           double v_cav_um3);

// Purcell factor at finite detuning; no angular correction (all dipoles are
// aligned with the cavity field).
double purcell_factor(double f_p, double detuning_mev, double linewidth_mev);

// Stark emitter + cavity mode composed into a bias-dependent Purcell factor.
// q_el is the emitter quality factor entering the harmonic sum (the mesa
// value by default; the in-cavity value may be selected instead).
class PurcellModel {
public:
    PurcellModel(StarkEmitter emitter, CavityMode mode, double q_el);

    double coefficient() const { return f_p_; }      // F_P
    double combined_q() const { return q_; }
    double linewidth_mev() const { return de_mev_; } // dE_EL + dE_cav
    double factor_at_bias(double bias_v) const;      // script F_P(V)
    double factor_at_detuning(double detuning_mev) const;

    const StarkEmitter& emitter() const { return emitter_; }
    const CavityMode& mode() const { return mode_; }

private:
    StarkEmitter emitter_;
    CavityMode mode_;
    double q_;
    double de_mev_;
    double f_p_;
};

// script F_P as a function of current density, via the bias-current table and
// the cavity's electrical area: J -> I -> V -> detuning -> factor.
std::function<double(double)> purcell_vs_drive(const PurcellModel& model,
                                               const BiasCurrentMap& map,
                                               const PatchCavity& cavity);

}  // namespace patchlum
