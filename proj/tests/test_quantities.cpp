#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "patchlum/quantities.hpp"

using namespace patchlum;

TEST_SUITE("quantities") {

TEST_CASE("energy to wavelength matches hand-evaluated hc/E") {
    // 1239.841984.../124 and /130, evaluated independently.
    CHECK(energy_to_wavelength(Energy(124.0)).um ==
          doctest::Approx(9.998725680096795).epsilon(1e-12));
    CHECK(energy_to_wavelength(Energy(130.0)).um ==
          doctest::Approx(9.537246033323097).epsilon(1e-12));
    // Definition of the conversion constant.
    CHECK(energy_to_wavelength(Energy(1239.841984)).um ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wavelength to energy") {
    CHECK(wavelength_to_energy(Wavelength(10.0)).mev ==
          doctest::Approx(123.98419843320025).epsilon(1e-12));
    CHECK(wavelength_to_energy(Wavelength(1.0)).mev ==
          doctest::Approx(1239.8419843320025).epsilon(1e-12));
}

TEST_CASE("conversion round-trips are exact to 1e-12 over nine decades") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> log_e(-3.0, 6.0);
    for (int i = 0; i < 1000; ++i) {
        const double e = std::pow(10.0, log_e(rng));
        const double back = wavelength_to_energy(energy_to_wavelength(Energy(e))).mev;
        CHECK(std::abs(back - e) <= 1e-12 * e);
    }
}

TEST_CASE("non-positive conversions are rejected") {
    CHECK_THROWS_AS(energy_to_wavelength(Energy(0.0)), ValidationError);
    CHECK_THROWS_AS(energy_to_wavelength(Energy(-5.0)), ValidationError);
    CHECK_THROWS_AS(wavelength_to_energy(Wavelength(0.0)), ValidationError);
}

TEST_CASE("no quantity admits non-finite values") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Energy(nan), ValidationError);
    CHECK_THROWS_AS(Energy(inf), ValidationError);
    CHECK_THROWS_AS(Wavelength(nan), ValidationError);
    CHECK_THROWS_AS(Lifetime(inf), ValidationError);
    CHECK_THROWS_AS(Rate(nan), ValidationError);
    CHECK_THROWS_AS(CurrentDensity(-inf), ValidationError);
}

TEST_CASE("rate and lifetime form a reciprocal pair") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> log_tau(-12.0, 0.0);
    for (int i = 0; i < 200; ++i) {
        const Lifetime tau(std::pow(10.0, log_tau(rng)));
        const Rate rate = to_rate(tau);
        CHECK(std::abs(rate.per_s * tau.s - 1.0) <= 1e-12);
        CHECK(std::abs(to_lifetime(rate).s - tau.s) <= 1e-12 * tau.s);
    }
    CHECK_THROWS_AS(Lifetime(0.0), ValidationError);
    CHECK_THROWS_AS(Rate(-1.0), ValidationError);
}

TEST_CASE("current density is non-negative") {
    CHECK(CurrentDensity(0.0).a_cm2 == 0.0);
    CHECK_THROWS_AS(CurrentDensity(-1e-9), ValidationError);
}

TEST_CASE("constants") {
    CHECK(constants::hc_mev_um == doctest::Approx(1239.841984).epsilon(1e-9));
    CHECK(mev_to_joule(130.0) ==
          doctest::Approx(130e-3 * 1.602176634e-19).epsilon(1e-15));
}

}  // TEST_SUITE
