#include "patchlum/ratemodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace patchlum {

namespace {

constexpr double ps = 1e-12;
constexpr double ns = 1e-9;
constexpr double nm_to_cm = 1e-7;
constexpr double um3_to_cm3 = 1e-12;

struct SiParams {
    double lp_cm;
    double tau3, tau2, tau32, tau_sp;  // s
    double sigma_v;                    // cm^3/s
    double gamma_tot;                  // 1/s
};

SiParams to_si(const CascadeParams& p) {
    return {p.lp_nm * nm_to_cm, p.tau3_ps * ps,    p.tau2_ps * ps,
            p.tau32_ps * ps,    p.tau_sp_ns * ns,  p.sigma_v_cm3_s,
            p.gamma_tot_per_s};
}

double injection_rate(double j_a_cm2, const SiParams& si) {
    return j_a_cm2 / (constants::elementary_charge * si.lp_cm);  // 1/(s cm^3)
}

}  // namespace

void validate(const CascadeParams& params) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0)) {
            throw ValidationError(std::string("cascade.") + field + ": must be > 0");
        }
    };
    positive(params.lp_nm, "Lp_nm");
    positive(params.tau3_ps, "tau3_ps");
    positive(params.tau2_ps, "tau2_ps");
    positive(params.tau32_ps, "tau32_ps");
    positive(params.tau_sp_ns, "tau_sp_ns");
    positive(params.sigma_v_cm3_s, "sigma_V");
    positive(params.gamma_tot_per_s, "Gamma_tot_per_s");
    if (params.gamma_r_per_s < 0.0 || params.gamma_nr_per_s < 0.0) {
        throw ValidationError("cascade.gamma_R/gamma_NR: must be >= 0");
    }
    const double sum = params.gamma_r_per_s + params.gamma_nr_per_s;
    if (std::abs(sum - params.gamma_tot_per_s) > 1e-12 * params.gamma_tot_per_s) {
        throw ValidationError(
            "cascade.Gamma_tot_per_s: must equal gamma_R + gamma_NR");
    }
    // tau3 is the total upper-state lifetime and already contains the 3->2 channel.
    if (1.0 / params.tau3_ps < 1.0 / params.tau32_ps) {
        throw ValidationError("cascade.tau3_ps: requires 1/tau3 >= 1/tau32");
    }
}

double tau_eff_s(const CascadeParams& params) {
    return params.tau3_ps * ps * (1.0 - params.tau2_ps / params.tau32_ps);
}

double calibrate_sigma_v(const CascadeParams& params, double j_th_a_cm2) {
    if (!(j_th_a_cm2 > 0.0)) {
        throw ValidationError("calibrate_sigma_v: J_th must be > 0");
    }
    const double tau_eff = tau_eff_s(params);
    if (!(tau_eff > 0.0)) {
        throw NumericalError("calibrate_sigma_v: tau_eff <= 0, no inversion");
    }
    return params.gamma_tot_per_s * constants::elementary_charge *
           (params.lp_nm * nm_to_cm) / (j_th_a_cm2 * tau_eff);
}

RateState derivatives(const RateState& state, const CascadeParams& params,
                      double fp, double j_a_cm2) {
    const SiParams si = to_si(params);
    const double dn = state.n3_cm3 - state.n2_cm3;
    // FP multiplies both radiative channels; 1/tau_st = sigma_V S.
    const double radiative = fp * (state.n3_cm3 / si.tau_sp + dn * si.sigma_v * state.s_cm3);
    RateState d;
    d.n3_cm3 = injection_rate(j_a_cm2, si) - state.n3_cm3 / si.tau3 - radiative;
    d.n2_cm3 = state.n3_cm3 / si.tau32 - state.n2_cm3 / si.tau2 + radiative;
    d.s_cm3 = -state.s_cm3 * si.gamma_tot + radiative;
    return d;
}

Trajectory integrate_transient(const RateState& initial, const CascadeParams& params,
                               double fp, double j_a_cm2, double t_end_s, double dt_s,
                               std::size_t stride) {
    validate(params);
    if (!(t_end_s > 0.0) || !(dt_s > 0.0) || stride == 0) {
        throw ValidationError("integrate_transient: t_end, dt and stride must be > 0");
    }
    const double dt_max = 0.01 * std::min({params.tau2_ps * ps, params.tau3_ps * ps,
                                           1.0 / params.gamma_tot_per_s});
    if (dt_s > dt_max) {
        throw ValidationError("integrate_transient: dt must be <= 0.01 min(tau2, tau3, 1/Gamma_tot)");
    }

    // Divergence guard: 1e12 x the purely spontaneous steady-state photon density.
    const SiParams si = to_si(params);
    const ColdCavity cc = cold_cavity_populations(j_a_cm2, params);
    const double s_spont = fp * cc.n3_cm3 / (si.tau_sp * si.gamma_tot);
    const double s_limit = 1e12 * std::max(s_spont, 1.0);

    auto rhs = [&](const RateState& y) { return derivatives(y, params, fp, j_a_cm2); };
    auto axpy = [](const RateState& y, double a, const RateState& d) {
        return RateState{y.n3_cm3 + a * d.n3_cm3, y.n2_cm3 + a * d.n2_cm3,
                         y.s_cm3 + a * d.s_cm3};
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end_s / dt_s));
    Trajectory traj;
    traj.t_s.reserve(n_steps / stride + 2);
    traj.states.reserve(n_steps / stride + 2);
    traj.t_s.push_back(0.0);
    traj.states.push_back(initial);

    RateState y = initial;
    RateState scale{initial.n3_cm3, initial.n2_cm3, initial.s_cm3};
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const RateState k1 = rhs(y);
        const RateState k2 = rhs(axpy(y, 0.5 * dt_s, k1));
        const RateState k3 = rhs(axpy(y, 0.5 * dt_s, k2));
        const RateState k4 = rhs(axpy(y, dt_s, k3));
        y.n3_cm3 += dt_s / 6.0 * (k1.n3_cm3 + 2 * k2.n3_cm3 + 2 * k3.n3_cm3 + k4.n3_cm3);
        y.n2_cm3 += dt_s / 6.0 * (k1.n2_cm3 + 2 * k2.n2_cm3 + 2 * k3.n2_cm3 + k4.n2_cm3);
        y.s_cm3 += dt_s / 6.0 * (k1.s_cm3 + 2 * k2.s_cm3 + 2 * k3.s_cm3 + k4.s_cm3);

        scale.n3_cm3 = std::max(scale.n3_cm3, std::abs(y.n3_cm3));
        scale.n2_cm3 = std::max(scale.n2_cm3, std::abs(y.n2_cm3));
        scale.s_cm3 = std::max(scale.s_cm3, std::abs(y.s_cm3));
        auto clamp_nonneg = [&traj](double& value, double ref) {
            if (value < 0.0) {
                if (value < -1e-12 * ref) traj.clamped = true;
                value = 0.0;
            }
        };
        clamp_nonneg(y.n3_cm3, scale.n3_cm3);
        clamp_nonneg(y.n2_cm3, scale.n2_cm3);
        clamp_nonneg(y.s_cm3, scale.s_cm3);
        if (y.s_cm3 > s_limit) {
            throw NumericalError("integrate_transient: photon density diverged (above threshold)");
        }
        if (step % stride == 0 || step == n_steps) {
            traj.t_s.push_back(static_cast<double>(step) * dt_s);
            traj.states.push_back(y);
        }
    }
    return traj;
}

ColdCavity cold_cavity_populations(double j_a_cm2, const CascadeParams& params) {
    if (!(j_a_cm2 >= 0.0)) {
        throw ValidationError("cold_cavity_populations: J must be >= 0");
    }
    const SiParams si = to_si(params);
    const double pump = injection_rate(j_a_cm2, si);
    return {pump * si.tau3, pump * tau_eff_s(params)};
}

SteadyStateResult steady_state_photon_density(const CascadeParams& params,
                                              double fp, double j_a_cm2) {
    if (!(fp >= 0.0)) {
        throw ValidationError("steady_state_photon_density: FP must be >= 0");
    }
    const SiParams si = to_si(params);
    const ColdCavity cc = cold_cavity_populations(j_a_cm2, params);

    SteadyStateResult result;
    result.n3_cm3 = cc.n3_cm3;
    result.dn_cm3 = cc.dn_cm3;
    result.j_th_eff_a_cm2 =
        fp > 0.0 ? threshold_current_density(params) / fp
                 : std::numeric_limits<double>::infinity();
    const double denom = si.gamma_tot - cc.dn_cm3 * si.sigma_v * fp;
    if (!(denom > 0.0)) {
        result.valid = false;
        result.s_cm3 = 0.0;
        return result;
    }
    result.valid = true;
    result.s_cm3 = fp * (cc.n3_cm3 / si.tau_sp) / denom;
    return result;
}

double threshold_current_density(const CascadeParams& params) {
    const double tau_eff = tau_eff_s(params);
    if (!(tau_eff > 0.0)) {
        throw NumericalError("threshold_current_density: tau_eff <= 0, no inversion");
    }
    return params.gamma_tot_per_s * constants::elementary_charge *
           (params.lp_nm * nm_to_cm) / (params.sigma_v_cm3_s * tau_eff);
}

EffectiveThreshold effective_threshold(double j_th_a_cm2,
                                       const std::function<double(double)>& fp_of_j,
                                       double j_max_a_cm2) {
    if (!(j_th_a_cm2 > 0.0) || !(j_max_a_cm2 > 0.0)) {
        throw ValidationError("effective_threshold: J_th and J_max must be > 0");
    }
    // g(J) = J FP(J) - J_th; find the smallest positive root by scanning for a
    // sign change, then bisecting.
    const int n_scan = 4096;
    auto g = [&](double j) { return j * fp_of_j(j) - j_th_a_cm2; };
    double lo = 0.0;  // g(0) = -J_th < 0
    double hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i <= n_scan; ++i) {
        const double j = j_max_a_cm2 * static_cast<double>(i) / n_scan;
        if (g(j) >= 0.0) {
            hi = j;
            bracketed = true;
            break;
        }
        lo = j;
    }
    if (!bracketed) return {0.0, false};
    while ((hi - lo) > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {0.5 * (lo + hi), true};
}

std::vector<double> photon_density_curve(const CascadeParams& params,
                                         const std::function<double(double)>& fp_of_j,
                                         std::span<const double> j_grid_a_cm2) {
    const SiParams si = to_si(params);
    const double tau_eff = tau_eff_s(params);
    if (!(tau_eff > 0.0)) {
        throw NumericalError("photon_density_curve: tau_eff <= 0, no inversion");
    }
    const double j_th = threshold_current_density(params);
    const double prefactor = (si.tau3 / si.tau_sp) / (tau_eff * si.sigma_v);
    std::vector<double> s(j_grid_a_cm2.size());
    for (std::size_t i = 0; i < j_grid_a_cm2.size(); ++i) {
        const double j = j_grid_a_cm2[i];
        const double fp = fp_of_j(j);
        if (!(fp > 0.0)) {
            s[i] = 0.0;  // emission extinguished off-resonance
            continue;
        }
        const double j_th_eff = j_th / fp;
        if (!(j < j_th_eff)) {
            throw NumericalError("photon_density_curve: J at or above effective threshold");
        }
        s[i] = prefactor * j / (j_th_eff - j);
    }
    return s;
}

double emitted_power_w(double s_cm3, Energy photon, double gamma_r_per_s,
                       double v_cav_um3) {
    if (s_cm3 < 0.0 || gamma_r_per_s < 0.0 || v_cav_um3 < 0.0) {
        throw ValidationError("emitted_power: factors must be >= 0");
    }
    return s_cm3 * mev_to_joule(photon.mev) * gamma_r_per_s * v_cav_um3 * um3_to_cm3;
}

double quantum_efficiency(double p_opt_w, Energy photon, double current_a) {
    if (!(current_a > 0.0)) {
        throw ValidationError("quantum_efficiency: current must be > 0");
    }
    const double photon_rate = p_opt_w / mev_to_joule(photon.mev);
    const double electron_rate = current_a / constants::elementary_charge;
    return photon_rate / electron_rate;
}

}  // namespace patchlum
