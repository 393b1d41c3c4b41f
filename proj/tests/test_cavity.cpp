#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "patchlum/cavity.hpp"
#include "patchlum/quantities.hpp"

using namespace patchlum;

namespace {

PatchCavity paper_cavity() {
    PatchCavity c;
    c.s_um = 1.4;
    c.h_um = 0.75;
    c.p_um = 7.0;
    c.nx = 10;
    c.ny = 10;
    c.n_mode = 3.5714;
    c.q_cav = 14.4;
    return c;
}

}  // namespace

TEST_SUITE("cavity") {

TEST_CASE("resonance follows 2ns = lambda") {
    // 2 * 3.5714 * 1.4 = 9.99992 by hand.
    CHECK(resonance(1.4, 3.5714).lambda_cav.um ==
          doctest::Approx(9.99992).epsilon(1e-12));
    CHECK(resonance(0.5, 1.0).lambda_cav.um == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(resonance(0.0, 3.5), ValidationError);
    CHECK_THROWS_AS(resonance(1.4, -1.0), ValidationError);
}

TEST_CASE("resonance energy is strictly decreasing in s") {
    double previous = 1e300;
    for (int i = 0; i <= 20; ++i) {
        const double s = 1.3 + 0.01 * i;
        const double e = resonance(s, 3.5714).e_cav.mev;
        CHECK(e < previous);
        previous = e;
    }
}

TEST_CASE("mode index inversion") {
    CHECK(mode_index_from_resonance(1.4, Wavelength(10.0)) ==
          doctest::Approx(3.5714285714285716).epsilon(1e-12));
    CHECK(mode_index_from_resonance(5.0, Wavelength(10.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Inverse identity.
    const double n = mode_index_from_resonance(1.4, Wavelength(9.7));
    CHECK(resonance(1.4, n).lambda_cav.um == doctest::Approx(9.7).epsilon(1e-12));
}

TEST_CASE("mode volume is s^2 H") {
    CHECK(mode_volume_um3(1.4, 0.75) == doctest::Approx(1.47).epsilon(1e-12));
    CHECK(mode_volume_um3(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(mode_volume_um3(2.8, 0.75) ==
          doctest::Approx(4.0 * mode_volume_um3(1.4, 0.75)).epsilon(1e-12));
}

TEST_CASE("areas and fill factor") {
    const PatchCavity c = paper_cavity();
    CHECK(electrical_area_um2(c) == doctest::Approx(196.0).epsilon(1e-12));
    CHECK(optical_area_um2(c) == doctest::Approx(4900.0).epsilon(1e-12));
    CHECK(fill_factor(c) == doctest::Approx(0.04).epsilon(1e-12));

    PatchCavity degenerate = c;
    degenerate.s_um = degenerate.p_um;  // packing bound
    CHECK(fill_factor(degenerate) == doctest::Approx(1.0).epsilon(1e-12));

    PatchCavity big = c;
    big.nx = big.ny = 20;
    CHECK(optical_area_um2(big) == doctest::Approx(140.0 * 140.0).epsilon(1e-12));
}

TEST_CASE("current to density uses the electrical area") {
    const PatchCavity c = paper_cavity();
    // 80 mA / (100 * 1.96e-8 cm^2) by hand.
    CHECK(current_to_density(0.080, c).a_cm2 ==
          doctest::Approx(40816.326530612245).epsilon(1e-12));
    CHECK(current_to_density(0.0, c).a_cm2 == 0.0);
    const CurrentDensity j = current_to_density(0.0123, c);
    CHECK(density_to_current_a(j, c) == doctest::Approx(0.0123).epsilon(1e-12));
    CHECK_THROWS_AS(current_to_density(-1.0, c), ValidationError);
}

TEST_CASE("reflectivity dip") {
    const CavityMode mode = cavity_mode(paper_cavity());
    // Symmetric grid through the resonance.
    const int n = 20001;
    std::vector<double> grid(n);
    const double half_span = 60.0;
    for (int i = 0; i < n; ++i) {
        grid[static_cast<std::size_t>(i)] =
            mode.e_cav.mev + half_span * (2.0 * i / (n - 1.0) - 1.0);
    }
    const std::vector<double> r = reflectivity_spectrum(mode, 1.0, grid);

    SUBCASE("full dip reaches zero on resonance") {
        const auto it = std::min_element(r.begin(), r.end());
        CHECK(*it == doctest::Approx(0.0).epsilon(1e-9));
        const std::size_t i_min = static_cast<std::size_t>(it - r.begin());
        CHECK(grid[i_min] == doctest::Approx(mode.e_cav.mev).epsilon(1e-12));
    }

    SUBCASE("dip FWHM equals E/Q by half-depth scan") {
        // Independent oracle: interpolate the 0.5 crossings of the dip.
        const double level = 0.5;
        double left = 0, right = 0;
        for (std::size_t i = 1; i < r.size(); ++i) {
            if (r[i - 1] > level && r[i] <= level) {
                const double t = (r[i - 1] - level) / (r[i - 1] - r[i]);
                left = grid[i - 1] + t * (grid[i] - grid[i - 1]);
            }
            if (r[i - 1] <= level && r[i] > level) {
                const double t = (level - r[i - 1]) / (r[i] - r[i - 1]);
                right = grid[i - 1] + t * (grid[i] - grid[i - 1]);
            }
        }
        const double fwhm = right - left;
        CHECK(fwhm == doctest::Approx(mode.de_cav.mev).epsilon(1e-4));
    }

    SUBCASE("far from resonance reflectivity returns to one") {
        CHECK(r.front() > 0.99);
        CHECK(r.back() > 0.99);
    }

    SUBCASE("symmetric grid gives bitwise-symmetric reflectivity") {
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(r[i] == r[r.size() - 1 - i]);
        }
    }
}

TEST_CASE("dip width at Q = 14, E = 130 meV") {
    // 130/14 = 9.2857... meV by hand.
    PatchCavity c = paper_cavity();
    c.q_cav = 14.0;
    c.n_mode = 3.406159297615392;  // 130 meV resonance for s = 1.4
    const CavityMode mode = cavity_mode(c);
    CHECK(mode.e_cav.mev == doctest::Approx(130.0).epsilon(1e-12));
    CHECK(mode.de_cav.mev == doctest::Approx(9.285714285714286).epsilon(1e-12));
    CHECK(mode.de_cav.mev * mode.q_cav ==
          doctest::Approx(mode.e_cav.mev).epsilon(1e-12));
}

TEST_CASE("validation names the offending field") {
    PatchCavity c = paper_cavity();
    c.s_um = -1.0;
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("cavity.s_um"),
                         ValidationError);
    c = paper_cavity();
    c.s_um = 8.0;  // s >= p
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = paper_cavity();
    c.nx = 0;
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("cavity.Nx"), ValidationError);
    c = paper_cavity();
    c.n_mode = 0.9;
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("reflectivity depth domain") {
    const CavityMode mode = cavity_mode(paper_cavity());
    const std::vector<double> grid{120.0, 124.0, 128.0};
    CHECK_THROWS_AS(reflectivity_spectrum(mode, -0.1, grid), ValidationError);
    CHECK_THROWS_AS(reflectivity_spectrum(mode, 1.1, grid), ValidationError);
}

}  // TEST_SUITE
