#pragma once

// Unit-tagged scalar quantities and physical constants.
// Canonical units across the library: meV (energy), um (length), s (time),
// A/cm^2 (current density), W (power). SI appears only inside formulas that
// mix fundamental constants.

#include <string_view>

#include "patchlum/errors.hpp"

namespace patchlum {

namespace constants {
// SI defining constants (2019 redefinition, exact).
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double speed_of_light = 299792458.0;         // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = planck / (2.0 * pi);  // J s
// hc in meV.um: E[meV] = hc_mev_um / lambda[um].  Numerically 1239.841984...
inline constexpr double hc_mev_um =
    planck * speed_of_light / elementary_charge * 1e9;
}  // namespace constants

// Throws ValidationError unless value is finite; returns it otherwise.
double finite_or_throw(double value, std::string_view what);

struct Energy {
    double mev{};
    Energy() = default;
    explicit Energy(double value_mev) : mev(finite_or_throw(value_mev, "Energy")) {}
};

struct Wavelength {
    double um{};
    Wavelength() = default;
    explicit Wavelength(double value_um)
        : um(finite_or_throw(value_um, "Wavelength")) {}
};

// Reciprocal pair: rate = 1/lifetime, both strictly positive.
struct Lifetime {
    double s{};
    Lifetime() = default;
    explicit Lifetime(double value_s);
};

struct Rate {
    double per_s{};
    Rate() = default;
    explicit Rate(double value_per_s);
};

struct CurrentDensity {
    double a_cm2{};
    CurrentDensity() = default;
    explicit CurrentDensity(double value_a_cm2);
};

Rate to_rate(Lifetime tau);
Lifetime to_lifetime(Rate rate);

// lambda[um] = hc/E; requires E > 0.
Wavelength energy_to_wavelength(Energy e);
// E[meV] = hc/lambda; requires lambda > 0.
Energy wavelength_to_energy(Wavelength lambda);

double mev_to_joule(double mev);

}  // namespace patchlum
