#pragma once

// Nonlinear least squares for device characterization. The generic solver is
// damped Gauss-Newton (Levenberg-style) with forward finite-difference
// Jacobians; the line fits use closed forms; the threshold fit is a
// one-dimensional golden-section search. All fits are deterministic.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "patchlum/quantities.hpp"

namespace patchlum {

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> params;
    std::vector<double> stderrs;  // linearized, from the normal matrix
    double rss{};
    int iterations{};
    bool converged{};
};

// parameter vector -> predicted samples (same length as the data).
using FitModel = std::function<std::vector<double>(std::span<const double>)>;

struct LeastSquaresOptions {
    int max_iterations{200};
    double step_tol{1e-8};      // relative step below which we stop
    double fd_rel_step{1e-6};   // forward-difference Jacobian step
    std::vector<double> lower;  // optional box bounds (empty = unbounded)
    std::vector<double> upper;
};

// Requires >= 2x more data points than parameters and a finite initial guess
// within bounds. Throws NumericalError on a rank-deficient normal matrix;
// hitting the iteration cap returns converged = false rather than throwing.
FitResult least_squares(const FitModel& model, std::span<const double> data,
                        std::span<const double> initial,
                        const std::vector<std::string>& names,
                        const LeastSquaresOptions& options = {});

// R(E) = 1 - depth L(E - E_cav, E_cav/Q); params {E_cav_meV, Q_cav, depth}.
FitResult fit_cavity_lorentzian(std::span<const double> energy_mev,
                                std::span<const double> reflectivity);

// E(V) = E0 + kappa (V - V0), V0 fixed by convention; closed-form weighted
// linear regression. params {E0_meV, kappa_meV_per_V}.
FitResult fit_stark(std::span<const double> bias_v, std::span<const double> peak_mev,
                    double v0_v);

// Normalized sub-threshold flux model J/(J_th/FP(J) - J), unit-max on the
// data grid; single free parameter J_th found by golden-section refinement
// after a coarse bracket. params {Jth_A_cm2}. Trial thresholds that place any
// datum past the pole get infinite residual.
FitResult fit_threshold(std::span<const double> j_a_cm2,
                        std::span<const double> flux_norm,
                        const std::function<double(double)>& fp_of_j);

// Zero-intercept slope of photon rate vs electron rate. params {eta_qe}.
FitResult fit_qe_slope(std::span<const double> current_a,
                       std::span<const double> power_w, Energy photon);

// Serialization used by the CLI; field names params/stderr/rss/iterations/
// converged, numbers in shortest round-trip form.
std::string to_json(const FitResult& result);

}  // namespace patchlum
