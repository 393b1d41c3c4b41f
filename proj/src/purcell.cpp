#include "patchlum/purcell.hpp"

#include <cmath>

namespace patchlum {

double combined_quality_factor(double q_el, double q_cav) {
    if (!(q_el > 0.0) || !(q_cav > 0.0)) {
        throw ValidationError("combined_quality_factor: quality factors must be > 0");
    }
    return 1.0 / (1.0 / q_el + 1.0 / q_cav);
}

double total_linewidth_mev(double de_el_mev, double de_cav_mev) {
    if (de_el_mev < 0.0 || de_cav_mev < 0.0 || !(de_el_mev + de_cav_mev > 0.0)) {
        throw ValidationError("total_linewidth: linewidths must be >= 0 and sum > 0");
    }
    return de_el_mev + de_cav_mev;
}

double lorentzian(double detuning_mev, double linewidth_mev) {
    if (!(linewidth_mev > 0.0)) {
        throw ValidationError("lorentzian: linewidth must be > 0");
    }
    const double w2 = linewidth_mev * linewidth_mev;
    return w2 / (4.0 * detuning_mev * detuning_mev + w2);
}

double purcell_coefficient(double q, Wavelength lambda_cav, double n_mode,
                           double v_cav_um3) {
    if (!(q > 0.0) || !(lambda_cav.um > 0.0) || !(n_mode > 0.0) || !(v_cav_um3 > 0.0)) {
        throw ValidationError("purcell_coefficient: all inputs must be > 0");
    }
    const double lam_n = lambda_cav.um / n_mode;
    return 3.0 * q * lam_n * lam_n * lam_n /
           (4.0 * constants::pi * constants::pi * v_cav_um3);
}

double purcell_factor(double f_p, double detuning_mev, double linewidth_mev) {
    if (!(f_p > 0.0)) {
        throw ValidationError("purcell_factor: coefficient must be > 0");
    }
    return f_p * lorentzian(detuning_mev, linewidth_mev);
}

PurcellModel::PurcellModel(StarkEmitter emitter, CavityMode mode, double q_el)
    : emitter_(std::move(emitter)), mode_(std::move(mode)) {
    validate(emitter_);
    if (!(mode_.n_mode > 0.0)) {
        throw ValidationError("PurcellModel: cavity mode carries no modal index");
    }
    q_ = combined_quality_factor(q_el, mode_.q_cav);
    de_mev_ = total_linewidth_mev(emitter_.de_el_mev, mode_.de_cav.mev);
    f_p_ = purcell_coefficient(q_, mode_.lambda_cav, mode_.n_mode, mode_.v_cav_um3);
}

double PurcellModel::factor_at_detuning(double detuning_mev) const {
    return purcell_factor(f_p_, detuning_mev, de_mev_);
}

double PurcellModel::factor_at_bias(double bias_v) const {
    return factor_at_detuning(detuning_mev(emitter_, bias_v, mode_));
}

std::function<double(double)> purcell_vs_drive(const PurcellModel& model,
                                               const BiasCurrentMap& map,
                                               const PatchCavity& cavity) {
    return [model, map, cavity](double j_a_cm2) {
        const double current_ma =
            density_to_current_a(CurrentDensity(j_a_cm2), cavity) * 1e3;
        return model.factor_at_bias(map.bias_v(current_ma));
    };
}

}  // namespace patchlum
