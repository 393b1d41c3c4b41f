#include "patchlum/emitter.hpp"

#include <algorithm>
#include <cmath>

#include "patchlum/purcell.hpp"

namespace patchlum {

void validate(const StarkEmitter& emitter) {
    if (!(emitter.e0.mev > 0.0)) {
        throw ValidationError("emitter.E0_meV: must be > 0");
    }
    if (!(emitter.de_el_mev > 0.0)) {
        throw ValidationError("emitter.dE_EL: must be > 0");
    }
    if (!std::isfinite(emitter.kappa_mev_per_v)) {
        throw ValidationError("emitter.kappa_meV_per_V: non-finite");
    }
    if (!(emitter.tau_sp_ref.s > 0.0)) {
        throw ValidationError("emitter.tau_sp_ns: must be > 0");
    }
}

Energy el_peak_energy(const StarkEmitter& emitter, double bias_v) {
    return Energy(emitter.e0.mev + emitter.kappa_mev_per_v * (bias_v - emitter.v0_v));
}

double el_quality_factor(const StarkEmitter& emitter, double bias_v) {
    return el_peak_energy(emitter, bias_v).mev / emitter.de_el_mev;
}

std::vector<double> mesa_spectrum(const StarkEmitter& emitter, double bias_v,
                                  std::span<const double> energy_grid_mev) {
    const double center = el_peak_energy(emitter, bias_v).mev;
    std::vector<double> intensity(energy_grid_mev.size());
    for (std::size_t i = 0; i < energy_grid_mev.size(); ++i) {
        intensity[i] = lorentzian(energy_grid_mev[i] - center, emitter.de_el_mev);
    }
    return intensity;
}

Lifetime spontaneous_lifetime(Energy e, Energy e_ref, Lifetime tau_ref) {
    if (!(e.mev > 0.0) || !(e_ref.mev > 0.0)) {
        throw ValidationError("spontaneous_lifetime: energies must be > 0");
    }
    const double ratio = e_ref.mev / e.mev;
    return Lifetime(tau_ref.s * ratio * ratio * ratio);
}

double detuning_mev(const StarkEmitter& emitter, double bias_v, const CavityMode& mode) {
    return el_peak_energy(emitter, bias_v).mev - mode.e_cav.mev;
}

double alignment_bias_v(const StarkEmitter& emitter, const CavityMode& mode) {
    if (emitter.kappa_mev_per_v == 0.0) {
        throw NumericalError("alignment_bias: kappa = 0, line does not tune");
    }
    return emitter.v0_v + (mode.e_cav.mev - emitter.e0.mev) / emitter.kappa_mev_per_v;
}

BiasCurrentMap::BiasCurrentMap(std::vector<double> bias_v, std::vector<double> current_ma)
    : bias_(std::move(bias_v)), current_(std::move(current_ma)) {
    if (bias_.size() != current_.size() || bias_.size() < 2) {
        throw ValidationError("BiasCurrentMap: needs >= 2 (V, I) samples of equal length");
    }
    for (std::size_t i = 0; i < bias_.size(); ++i) {
        finite_or_throw(bias_[i], "BiasCurrentMap.bias_V");
        finite_or_throw(current_[i], "BiasCurrentMap.current_mA");
        if (i > 0 && !(bias_[i] > bias_[i - 1])) {
            throw ValidationError("BiasCurrentMap: bias_V must be strictly increasing");
        }
        if (i > 0 && current_[i] < current_[i - 1]) {
            throw ValidationError("BiasCurrentMap: current_mA must be non-decreasing");
        }
    }
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y,
                   double xq, const char* what) {
    if (xq < x.front() || xq > x.back()) {
        throw ValidationError(std::string("BiasCurrentMap: ") + what +
                              " query outside table hull");
    }
    const auto it = std::lower_bound(x.begin(), x.end(), xq);
    if (it == x.begin()) return y.front();
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    const std::size_t lo = hi - 1;
    const double t = (xq - x[lo]) / (x[hi] - x[lo]);
    return y[lo] + t * (y[hi] - y[lo]);
}

}  // namespace

double BiasCurrentMap::current_ma(double bias_v) const {
    return interpolate(bias_, current_, bias_v, "bias");
}

double BiasCurrentMap::bias_v(double current_ma) const {
    for (std::size_t i = 1; i < current_.size(); ++i) {
        if (!(current_[i] > current_[i - 1])) {
            throw ValidationError(
                "BiasCurrentMap: inverse lookup needs strictly increasing current");
        }
    }
    return interpolate(current_, bias_, current_ma, "current");
}

}  // namespace patchlum
