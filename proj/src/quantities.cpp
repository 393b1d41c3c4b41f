#include "patchlum/quantities.hpp"

#include <cmath>

namespace patchlum {

double finite_or_throw(double value, std::string_view what) {
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(what) + ": non-finite value");
    }
    return value;
}

Lifetime::Lifetime(double value_s) : s(finite_or_throw(value_s, "Lifetime")) {
    if (s <= 0.0) throw ValidationError("Lifetime: must be > 0");
}

Rate::Rate(double value_per_s) : per_s(finite_or_throw(value_per_s, "Rate")) {
    if (per_s <= 0.0) throw ValidationError("Rate: must be > 0");
}

CurrentDensity::CurrentDensity(double value_a_cm2)
    : a_cm2(finite_or_throw(value_a_cm2, "CurrentDensity")) {
    if (a_cm2 < 0.0) throw ValidationError("CurrentDensity: must be >= 0");
}

Rate to_rate(Lifetime tau) { return Rate(1.0 / tau.s); }

Lifetime to_lifetime(Rate rate) { return Lifetime(1.0 / rate.per_s); }

Wavelength energy_to_wavelength(Energy e) {
    if (e.mev <= 0.0) {
        throw ValidationError("energy_to_wavelength: energy must be > 0 meV");
    }
    return Wavelength(constants::hc_mev_um / e.mev);
}

Energy wavelength_to_energy(Wavelength lambda) {
    if (lambda.um <= 0.0) {
        throw ValidationError("wavelength_to_energy: wavelength must be > 0 um");
    }
    return Energy(constants::hc_mev_um / lambda.um);
}

double mev_to_joule(double mev) {
    return mev * 1e-3 * constants::elementary_charge;
}

}  // namespace patchlum
