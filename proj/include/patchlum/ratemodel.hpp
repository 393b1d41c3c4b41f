#pragma once

// Three-level quantum cascade rate equations with the Purcell factor applied
// to every radiative term (spontaneous-emission coupling factor is 1):
//
//   dn3/dt = J/(q Lp) - n3/tau3 - FP (n3/tau_sp + dn/tau_st)
//   dn2/dt = n3/tau32 - n2/tau2 + FP (n3/tau_sp + dn/tau_st)
//   dS/dt  = -S Gamma_tot      + FP (n3/tau_sp + dn/tau_st)
//
// with dn = n3 - n2 and 1/tau_st = sigma_V S. Below threshold the photon
// density has the closed form S = FP (n3/tau_sp) / (Gamma_tot - dn sigma_V FP)
// in the cold-cavity approximation, equivalently
// S = (tau3/tau_sp) (1/(tau_eff sigma_V)) J/(J'_th - J)  with  J'_th = J_th/FP.

#include <functional>
#include <span>
#include <vector>

#include "patchlum/quantities.hpp"

namespace patchlum {

struct CascadeParams {
    double lp_nm{50.0};          // cascade period length
    double tau3_ps{1.0};         // upper-state non-radiative lifetime
    double tau2_ps{0.2};         // lower-state lifetime
    double tau32_ps{2.0};        // 3 -> 2 non-radiative time
    double tau_sp_ns{50.0};      // free-space spontaneous lifetime
    double sigma_v_cm3_s{3.56039252e-5};  // modal gain rate, sigma_V S = 1/tau_st
    double gamma_tot_per_s{1e12};  // total photon loss rate (1/tau_loss)
    double gamma_r_per_s{0.8e12};  // radiative part
    double gamma_nr_per_s{0.2e12}; // non-radiative part
};

// Throws ValidationError naming the offending field. Enforces
// gamma_tot = gamma_r + gamma_nr (1e-12 relative) and 1/tau3 >= 1/tau32.
void validate(const CascadeParams& params);

// tau_eff = tau3 (1 - tau2/tau32), in seconds. Non-positive when tau2 >= tau32
// (no population inversion); thresholds are then undefined.
double tau_eff_s(const CascadeParams& params);

// sigma_V that places the bare threshold at j_th (A/cm^2).
double calibrate_sigma_v(const CascadeParams& params, double j_th_a_cm2);

struct RateState {
    double n3_cm3{};  // upper-state electron density
    double n2_cm3{};  // lower-state electron density
    double s_cm3{};   // photon density
};

// Right-hand side of the system; fp is the Purcell factor, j in A/cm^2.
RateState derivatives(const RateState& state, const CascadeParams& params,
                      double fp, double j_a_cm2);

struct Trajectory {
    std::vector<double> t_s;
    std::vector<RateState> states;
    bool clamped{};  // a step undershot below -1e-12 of scale and was clamped
};

// Classical fixed-step RK4. Requires dt <= 0.01 min(tau2, tau3, 1/Gamma_tot).
// Throws NumericalError if S diverges past 1e12 x the spontaneous scale
// (drive above threshold). stride > 1 stores every stride-th sample.
Trajectory integrate_transient(const RateState& initial, const CascadeParams& params,
                               double fp, double j_a_cm2, double t_end_s, double dt_s,
                               std::size_t stride = 1);

struct ColdCavity {
    double n3_cm3{};
    double dn_cm3{};
};

// n3 = J tau3/(q Lp), dn = J tau_eff/(q Lp); photon back-action ignored.
ColdCavity cold_cavity_populations(double j_a_cm2, const CascadeParams& params);

struct SteadyStateResult {
    double s_cm3{};          // photon density (valid only below threshold)
    double n3_cm3{};
    double dn_cm3{};
    double j_th_eff_a_cm2{};  // J_th / FP at this drive's Purcell factor
    bool valid{};             // false iff J >= J'_th
};

// Cold-cavity populations inserted into the steady-state closed form.
SteadyStateResult steady_state_photon_density(const CascadeParams& params,
                                              double fp, double j_a_cm2);

// J_th = Gamma_tot q Lp / (sigma_V tau_eff), in A/cm^2.
double threshold_current_density(const CascadeParams& params);

struct EffectiveThreshold {
    double j_a_cm2{};
    bool found{};
};

// Smallest positive root of J FP(J) = J_th on (0, j_max], located by
// bracketing bisection to 1e-10 relative. found = false when the drive never
// reaches threshold in the interval.
EffectiveThreshold effective_threshold(double j_th_a_cm2,
                                       const std::function<double(double)>& fp_of_j,
                                       double j_max_a_cm2);

// Eq-2 form, S = (tau3/tau_sp)(1/(tau_eff sigma_V)) J/(J'_th(J) - J), evaluated
// pointwise with J'_th = J_th / FP(J). The grid must stay below threshold.
std::vector<double> photon_density_curve(const CascadeParams& params,
                                         const std::function<double(double)>& fp_of_j,
                                         std::span<const double> j_grid_a_cm2);

// P_opt = S hbar w gamma_R V_cav, result in W (S in cm^-3, V in um^3).
double emitted_power_w(double s_cm3, Energy photon, double gamma_r_per_s,
                       double v_cav_um3);

// eta = (P/hw) / (I/q): photons out per electron in.
double quantum_efficiency(double p_opt_w, Energy photon, double current_a);

}  // namespace patchlum
