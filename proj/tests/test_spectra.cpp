#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "patchlum/spectra.hpp"

using namespace patchlum;

namespace {

StarkEmitter paper_emitter() {
    StarkEmitter e;
    e.e0 = Energy(130.0);
    e.v0_v = 4.5;
    e.kappa_mev_per_v = 10.0;
    e.de_el_mev = 130.0 / 9.0;
    e.tau_sp_ref = Lifetime(50e-9);
    e.e_ref = Energy(130.0);
    return e;
}

CavityMode mode_at(double e_cav_mev, double q_cav) {
    PatchCavity c;
    c.s_um = 1.4;
    c.h_um = 0.75;
    c.p_um = 7.0;
    c.n_mode = constants::hc_mev_um / e_cav_mev / 2.8;
    c.q_cav = q_cav;
    return cavity_mode(c);
}

// Analytic FWHM of the product of two unit-peak Lorentzians with common
// center: solve (x + a^2)(x + b^2) = 2 a^2 b^2 for x = delta^2, a = G1/2,
// b = G2/2. Independent oracle for the grid extraction.
double product_fwhm(double g1, double g2) {
    const double a2 = 0.25 * g1 * g1;
    const double b2 = 0.25 * g2 * g2;
    const double x =
        0.5 * (-(a2 + b2) + std::sqrt((a2 + b2) * (a2 + b2) + 4.0 * a2 * b2));
    return 2.0 * std::sqrt(x);
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("aligned paper case: factor-2 narrowing, Q about 18") {
    const StarkEmitter e = paper_emitter();
    const CavityMode mode = mode_at(130.0, 14.4);
    const std::vector<double> grid = energy_grid(130.0, 240.0, 48001);
    const EmissionSpectrum spectrum = filtered_spectrum(e, 4.5, mode, grid);

    // Analytic oracle: 7.0706 meV for dE_EL = 130/9 and dE_cav = 130/14.4.
    const double expected = product_fwhm(130.0 / 9.0, 130.0 / 14.4);
    CHECK(expected == doctest::Approx(7.07058651982733).epsilon(1e-12));
    CHECK(spectrum.fwhm_mev == doctest::Approx(expected).epsilon(5e-4));
    CHECK(spectrum.peak_mev == doctest::Approx(130.0).epsilon(1e-6));

    const double narrowing = (130.0 / 9.0) / spectrum.fwhm_mev;
    CHECK(narrowing == doctest::Approx(2.0428919728143273).epsilon(1e-3));
    CHECK(spectrum.quality == doctest::Approx(18.386027755328946).epsilon(1e-3));
    // The filtered line beats the bare cavity Q: more than a passive filter.
    CHECK(spectrum.quality > mode.q_cav);
}

TEST_CASE("transparent filter recovers the mesa line") {
    const StarkEmitter e = paper_emitter();
    const CavityMode broad = mode_at(130.0, 1e-3);  // dE_cav huge
    const std::vector<double> grid = energy_grid(130.0, 300.0, 60001);
    const EmissionSpectrum spectrum = filtered_spectrum(e, 4.5, broad, grid);
    CHECK(spectrum.fwhm_mev == doctest::Approx(e.de_el_mev).epsilon(1e-3));
}

TEST_CASE("detuned case: peak sits between the lines, toward the narrower") {
    const StarkEmitter e = paper_emitter();       // dE_EL = 14.44 meV
    const CavityMode mode = mode_at(130.0, 14.4);  // dE_cav = 9.03 meV (narrower)
    const double bias = 5.0;                       // E_EL = 135 meV
    const std::vector<double> grid = energy_grid(132.5, 250.0, 50001);
    const EmissionSpectrum spectrum = filtered_spectrum(e, bias, mode, grid);
    CHECK(spectrum.peak_mev > 130.0);
    CHECK(spectrum.peak_mev < 135.0);
    // Weighted toward the narrower (cavity) line.
    CHECK(spectrum.peak_mev - 130.0 < 135.0 - spectrum.peak_mev);
}

TEST_CASE("product FWHM never exceeds the narrower linewidth") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> width(1.0, 40.0);
    for (int i = 0; i < 200; ++i) {
        const double g1 = width(rng), g2 = width(rng);
        const double fwhm = product_fwhm(g1, g2);
        CHECK(fwhm < std::min(g1, g2));
    }
    // And the implementation agrees with the analytic value on a dense grid.
    const StarkEmitter e = paper_emitter();
    const CavityMode mode = mode_at(130.0, 10.0);
    const std::vector<double> grid = energy_grid(130.0, 260.0, 52001);
    const EmissionSpectrum spectrum = filtered_spectrum(e, 4.5, mode, grid);
    CHECK(spectrum.fwhm_mev ==
          doctest::Approx(product_fwhm(e.de_el_mev, 13.0)).epsilon(1e-3));
}

TEST_CASE("narrowing factor is invariant under common linewidth rescaling") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> scale(0.2, 5.0);
    const double g1 = 14.444444444444445, g2 = 9.027777777777777;
    const double reference = g1 / product_fwhm(g1, g2);
    for (int i = 0; i < 100; ++i) {
        const double c = scale(rng);
        const double narrowing = c * g1 / product_fwhm(c * g1, c * g2);
        CHECK(narrowing == doctest::Approx(reference).epsilon(1e-9));
    }
}

TEST_CASE("spectrum quality factor") {
    const std::vector<double> grid = energy_grid(130.0, 200.0, 40001);

    SUBCASE("pure Lorentzian round-trips its Q") {
        std::vector<double> intensity(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double d = grid[i] - 130.0;
            const double w = 130.0 / 14.0;
            intensity[i] = w * w / (4.0 * d * d + w * w);
        }
        CHECK(spectrum_quality_factor(grid, intensity) ==
              doctest::Approx(14.0).epsilon(1e-3));

        SUBCASE("rescaling the intensity leaves Q unchanged") {
            std::vector<double> scaled = intensity;
            for (double& v : scaled) v *= 7.3;
            CHECK(spectrum_quality_factor(grid, scaled) ==
                  doctest::Approx(spectrum_quality_factor(grid, intensity))
                      .epsilon(1e-12));
        }
    }

    SUBCASE("multimodal spectra are an analysis error") {
        std::vector<double> intensity(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double d1 = grid[i] - 100.0;
            const double d2 = grid[i] - 160.0;
            intensity[i] = 25.0 / (d1 * d1 + 25.0) + 25.0 / (d2 * d2 + 25.0);
        }
        CHECK_THROWS_AS(spectrum_quality_factor(grid, intensity), NumericalError);
    }

    SUBCASE("flat spectra are an analysis error") {
        const std::vector<double> flat(grid.size(), 0.0);
        CHECK_THROWS_AS(spectrum_quality_factor(grid, flat), NumericalError);
    }
}

}  // TEST_SUITE
