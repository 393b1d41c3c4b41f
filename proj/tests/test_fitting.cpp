#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "patchlum/fitting.hpp"
#include "patchlum/purcell.hpp"

using namespace patchlum;

namespace {

constexpr double kFp = 6.285030960706243;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1.0);
    }
    return x;
}

// Purcell factor vs J with a linear Stark detuning; same shape the CLI builds
// from an IV table, written out directly here.
std::function<double(double)> stark_fp(double j_align, double slope_mev_per_a_cm2,
                                       double de_mev) {
    return [=](double j) {
        const double d = slope_mev_per_a_cm2 * (j - j_align);
        return kFp * de_mev * de_mev / (4.0 * d * d + de_mev * de_mev);
    };
}

// Independent forward evaluation of the normalized sub-threshold flux.
std::vector<double> flux_from_eq2(std::span<const double> j,
                                  const std::function<double(double)>& fp,
                                  double j_th) {
    std::vector<double> s(j.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        s[i] = j[i] / (j_th / fp(j[i]) - j[i]);
        peak = std::max(peak, s[i]);
    }
    for (double& v : s) v /= peak;
    return s;
}

}  // namespace

TEST_SUITE("fitting") {

TEST_CASE("exactly solvable linear model") {
    const std::vector<double> x = linspace(1.0, 10.0, 10);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.5 * x[i];
    const FitModel model = [&x](std::span<const double> p) {
        std::vector<double> f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) f[i] = p[0] * x[i];
        return f;
    };
    const FitResult fit = least_squares(model, y, std::vector<double>{1.0}, {"a"});
    CHECK(fit.converged);
    CHECK(fit.iterations <= 3);
    CHECK(fit.params[0] == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(fit.rss < 1e-18);
}

TEST_CASE("duplicate parameters are rank-deficient") {
    const std::vector<double> x = linspace(0.0, 1.0, 20);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i];
    const FitModel degenerate = [&x](std::span<const double> p) {
        std::vector<double> f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) f[i] = (p[0] + p[1]) * x[i];
        return f;
    };
    CHECK_THROWS_AS(
        least_squares(degenerate, y, std::vector<double>{1.0, 1.0}, {"a", "b"}),
        NumericalError);
}

TEST_CASE("pre-conditions") {
    const FitModel model = [](std::span<const double> p) {
        return std::vector<double>{p[0], p[0]};
    };
    const std::vector<double> tiny{1.0, 2.0};
    CHECK_NOTHROW(least_squares(model, tiny, std::vector<double>{1.0}, {"a"}));
    const std::vector<double> too_small{1.0};
    CHECK_THROWS_AS(
        least_squares(model, too_small, std::vector<double>{1.0}, {"a"}),
        ValidationError);
}

TEST_CASE("cavity Lorentzian dip fit") {
    const std::vector<double> grid = linspace(100.0, 160.0, 301);
    auto dip = [&grid](double e0, double q, double depth) {
        std::vector<double> r(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            r[i] = 1.0 - depth * lorentzian(grid[i] - e0, e0 / q);
        }
        return r;
    };

    SUBCASE("noiseless round trip is exact to 1e-8") {
        const std::vector<double> r = dip(130.0, 14.0, 0.9);
        const FitResult fit = fit_cavity_lorentzian(grid, r);
        CHECK(fit.converged);
        CHECK(fit.params[0] == doctest::Approx(130.0).epsilon(1e-8));
        CHECK(fit.params[1] == doctest::Approx(14.0).epsilon(1e-8));
        CHECK(fit.params[2] == doctest::Approx(0.9).epsilon(1e-8));
    }

    SUBCASE("1% additive noise: parameters within 3 standard errors") {
        int checks = 0, within = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::mt19937 rng(1000 + trial);
            std::normal_distribution<double> noise(0.0, 0.01);
            std::vector<double> r = dip(130.0, 14.0, 0.9);
            for (double& v : r) v += noise(rng);
            const FitResult fit = fit_cavity_lorentzian(grid, r);
            REQUIRE(fit.converged);
            const double truth[3] = {130.0, 14.0, 0.9};
            for (int k = 0; k < 3; ++k) {
                ++checks;
                if (std::abs(fit.params[static_cast<std::size_t>(k)] - truth[k]) <=
                    3.0 * fit.stderrs[static_cast<std::size_t>(k)]) {
                    ++within;
                }
            }
        }
        // 3-sigma coverage with a fixed seed schedule; allow the odd tail event.
        CHECK(within >= checks - 3);
    }

    SUBCASE("flat spectrum: depth pinned near zero or flagged") {
        const std::vector<double> flat(grid.size(), 1.0);
        const FitResult fit = fit_cavity_lorentzian(grid, flat);
        CHECK((fit.params[2] < 1e-6 || !fit.converged));
    }

    SUBCASE("determinism: identical bytes in, identical JSON out") {
        std::mt19937 rng(77);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> r = dip(130.0, 14.0, 0.9);
        for (double& v : r) v += noise(rng);
        const std::string a = to_json(fit_cavity_lorentzian(grid, r));
        const std::string b = to_json(fit_cavity_lorentzian(grid, r));
        CHECK(a == b);
    }

    SUBCASE("residuals are orthogonal to the Jacobian at the optimum") {
        std::mt19937 rng(31);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> r = dip(130.0, 14.0, 0.9);
        for (double& v : r) v += noise(rng);
        const FitResult fit = fit_cavity_lorentzian(grid, r);
        REQUIRE(fit.converged);
        // Central-difference Jacobian computed here, independent of the solver.
        const auto model_at = [&](double e0, double q, double d) { return dip(e0, q, d); };
        const double p0 = fit.params[0], p1 = fit.params[1], p2 = fit.params[2];
        const std::vector<double> f = model_at(p0, p1, p2);
        std::vector<double> residual(grid.size());
        double r_norm = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            residual[i] = r[i] - f[i];
            r_norm += residual[i] * residual[i];
        }
        r_norm = std::sqrt(r_norm);
        const double h[3] = {1e-5 * p0, 1e-5 * p1, 1e-5 * p2};
        const std::vector<double> fp[3] = {model_at(p0 + h[0], p1, p2),
                                           model_at(p0, p1 + h[1], p2),
                                           model_at(p0, p1, p2 + h[2])};
        const std::vector<double> fm[3] = {model_at(p0 - h[0], p1, p2),
                                           model_at(p0, p1 - h[1], p2),
                                           model_at(p0, p1, p2 - h[2])};
        for (int k = 0; k < 3; ++k) {
            double dot = 0.0, col_norm = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double jki = (fp[k][i] - fm[k][i]) / (2.0 * h[k]);
                dot += jki * residual[i];
                col_norm += jki * jki;
            }
            CHECK(std::abs(dot) <= 1e-6 * std::sqrt(col_norm) * r_norm);
        }
    }
}

TEST_CASE("Stark line fit") {
    const double v0 = 4.5;

    SUBCASE("exact line recovery") {
        const std::vector<double> v = linspace(3.5, 5.5, 9);
        std::vector<double> e(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) e[i] = 130.0 + 10.0 * (v[i] - v0);
        const FitResult fit = fit_stark(v, e, v0);
        CHECK(fit.params[0] == doctest::Approx(130.0).epsilon(1e-12));
        CHECK(fit.params[1] == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(fit.converged);
    }

    SUBCASE("kappa = 0 data gives zero slope") {
        const std::vector<double> v = linspace(3.0, 6.0, 7);
        const std::vector<double> e(v.size(), 130.0);
        const FitResult fit = fit_stark(v, e, v0);
        CHECK(std::abs(fit.params[1]) <= 1e-12);
    }

    SUBCASE("noisy slope within 3 sigma over seeded trials") {
        const std::vector<double> v = linspace(3.5, 5.5, 9);
        int within = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::mt19937 rng(2000 + trial);
            std::normal_distribution<double> noise(0.0, 0.3);
            std::vector<double> e(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                e[i] = 130.0 + 10.0 * (v[i] - v0) + noise(rng);
            }
            const FitResult fit = fit_stark(v, e, v0);
            if (std::abs(fit.params[1] - 10.0) <= 3.0 * fit.stderrs[1]) ++within;
        }
        CHECK(within >= 97);
    }

    SUBCASE("needs at least three points") {
        CHECK_THROWS_AS(fit_stark(std::vector<double>{4.0, 5.0},
                                  std::vector<double>{130.0, 140.0}, v0),
                        ValidationError);
    }
}

TEST_CASE("threshold fit") {
    const double j_th = 25000.0;
    const auto fp = stark_fp(2000.0, 2.934e-3, 23.47222222222222);
    const std::vector<double> j = linspace(500.0, 30000.0, 60);

    SUBCASE("noiseless round trip to 1e-6") {
        const std::vector<double> flux = flux_from_eq2(j, fp, j_th);
        const FitResult fit = fit_threshold(j, flux, fp);
        CHECK(fit.converged);
        CHECK(fit.params[0] == doctest::Approx(j_th).epsilon(1e-6));
    }

    SUBCASE("constant-FP variant: threshold equals pole times FP") {
        auto constant = [](double) { return kFp; };
        const std::vector<double> j_low = linspace(100.0, 3900.0, 40);
        const std::vector<double> flux = flux_from_eq2(j_low, constant, j_th);
        const FitResult fit = fit_threshold(j_low, flux, constant);
        // Pole sits at J_th / FP; the fitted threshold is pole * FP.
        CHECK(fit.params[0] / kFp == doctest::Approx(j_th / kFp).epsilon(1e-6));
    }

    SUBCASE("2% multiplicative noise recovers within 5% (seeded trials)") {
        int good = 0;
        for (int trial = 0; trial < 5; ++trial) {
            std::mt19937 rng(3000 + trial);
            std::normal_distribution<double> noise(0.0, 0.02);
            std::vector<double> flux = flux_from_eq2(j, fp, j_th);
            for (double& v : flux) v *= 1.0 + noise(rng);
            const FitResult fit = fit_threshold(j, flux, fp);
            if (std::abs(fit.params[0] - j_th) / j_th < 0.05) ++good;
        }
        CHECK(good >= 4);
    }

    SUBCASE("scale invariance: rescaled flux gives the same threshold") {
        std::vector<double> flux = flux_from_eq2(j, fp, j_th);
        const FitResult base = fit_threshold(j, flux, fp);
        for (double& v : flux) v *= 123.0;
        const FitResult scaled = fit_threshold(j, flux, fp);
        CHECK(scaled.params[0] ==
              doctest::Approx(base.params[0]).epsilon(1e-12));
    }

    SUBCASE("data past every admissible pole is rejected") {
        // Flux rising right up to huge J with a fast-growing FP makes every
        // trial threshold inadmissible only if FP J exceeds any bound; here a
        // valid bracket always exists, so instead check the guard for zero FP.
        auto dead = [](double) { return 0.0; };
        const std::vector<double> flux(j.size(), 0.5);
        CHECK_THROWS_AS(fit_threshold(j, flux, dead), NumericalError);
    }
}

TEST_CASE("quantum-efficiency slope fit") {
    SUBCASE("single point reproduces the hand-evaluated ratio") {
        const FitResult fit = fit_qe_slope(std::vector<double>{0.080},
                                           std::vector<double>{2.9e-6}, Energy(130.0));
        CHECK(fit.params[0] == doctest::Approx(2.788461538461538e-4).epsilon(1e-12));
    }

    SUBCASE("perfectly linear data recovers the exact slope") {
        const std::vector<double> i = linspace(0.010, 0.080, 8);
        std::vector<double> p(i.size());
        const double eta = 2.788461538461538e-4;
        for (std::size_t k = 0; k < i.size(); ++k) {
            p[k] = eta * (i[k] / constants::elementary_charge) * mev_to_joule(130.0);
        }
        const FitResult fit = fit_qe_slope(i, p, Energy(130.0));
        CHECK(fit.params[0] == doctest::Approx(eta).epsilon(1e-12));
        CHECK(fit.rss <= 1e-12 * eta);
    }

    SUBCASE("mesa-scale data sits two orders below the cavity value") {
        const FitResult fit = fit_qe_slope(std::vector<double>{0.080},
                                           std::vector<double>{0.03e-6}, Energy(130.0));
        CHECK(fit.params[0] == doctest::Approx(2.8846153846153846e-6).epsilon(1e-12));
        CHECK(fit.params[0] < 0.01 * 2.9e-4);
    }
}

TEST_CASE("FitResult JSON shape") {
    FitResult fit;
    fit.names = {"a", "b"};
    fit.params = {1.5, -2.0};
    fit.stderrs = {0.1, 0.25};
    fit.rss = 0.125;
    fit.iterations = 7;
    fit.converged = true;
    CHECK(to_json(fit) ==
          "{\"params\":{\"a\":1.5,\"b\":-2},\"stderr\":{\"a\":0.1,\"b\":0.25},"
          "\"rss\":0.125,\"iterations\":7,\"converged\":true}");
}

}  // TEST_SUITE
