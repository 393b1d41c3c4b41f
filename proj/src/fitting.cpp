#include "patchlum/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "patchlum/format.hpp"
#include "patchlum/purcell.hpp"

namespace patchlum {

namespace {

using Matrix = std::vector<std::vector<double>>;  // small dense, row-major

double residual_sum_of_squares(std::span<const double> data,
                               const std::vector<double>& predicted) {
    double rss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = data[i] - predicted[i];
        rss += r * r;
    }
    return rss;
}

// Cholesky factorization in place; returns false when a pivot drops below
// tol times the diagonal scale.
bool cholesky(Matrix& a, double tol) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        double d = a[k][k];
        for (std::size_t j = 0; j < k; ++j) d -= a[k][j] * a[k][j];
        if (!(d > tol)) return false;
        a[k][k] = std::sqrt(d);
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = a[i][k];
            for (std::size_t j = 0; j < k; ++j) s -= a[i][j] * a[k][j];
            a[i][k] = s / a[k][k];
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const Matrix& chol, std::span<const double> rhs) {
    const std::size_t n = chol.size();
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) x[i] -= chol[i][j] * x[j];
        x[i] /= chol[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= chol[j][i] * x[j];
        x[i] /= chol[i][i];
    }
    return x;
}

// Columns of the forward-difference Jacobian, one per parameter.
Matrix jacobian(const FitModel& model, std::span<const double> p,
                const std::vector<double>& f0, double rel_step) {
    const std::size_t n_params = p.size();
    Matrix j(n_params, std::vector<double>(f0.size()));
    std::vector<double> probe(p.begin(), p.end());
    for (std::size_t k = 0; k < n_params; ++k) {
        const double h = rel_step * (p[k] != 0.0 ? std::abs(p[k]) : 1.0);
        const double saved = probe[k];
        probe[k] = saved + h;
        const std::vector<double> fk = model(probe);
        probe[k] = saved;
        if (fk.size() != f0.size()) {
            throw ValidationError("least_squares: model changed its sample count");
        }
        for (std::size_t i = 0; i < f0.size(); ++i) {
            j[k][i] = (fk[i] - f0[i]) / h;
        }
    }
    return j;
}

Matrix normal_matrix(const Matrix& j) {
    const std::size_t p = j.size();
    Matrix a(p, std::vector<double>(p, 0.0));
    for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t l = 0; l <= k; ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < j[k].size(); ++i) s += j[k][i] * j[l][i];
            a[k][l] = a[l][k] = s;
        }
    }
    return a;
}

void throw_if_rank_deficient(const Matrix& jtj) {
    const std::size_t p = jtj.size();
    Matrix scaled(p, std::vector<double>(p));
    for (std::size_t k = 0; k < p; ++k) {
        if (!(jtj[k][k] > 0.0)) {
            throw NumericalError("least_squares: rank-deficient normal matrix");
        }
    }
    for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t l = 0; l < p; ++l) {
            scaled[k][l] = jtj[k][l] / std::sqrt(jtj[k][k] * jtj[l][l]);
        }
    }
    if (!cholesky(scaled, 1e-12)) {
        throw NumericalError("least_squares: rank-deficient normal matrix");
    }
}

void clamp_to_bounds(std::vector<double>& p, const LeastSquaresOptions& options) {
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!options.lower.empty()) p[k] = std::max(p[k], options.lower[k]);
        if (!options.upper.empty()) p[k] = std::min(p[k], options.upper[k]);
    }
}

std::vector<double> stderrs_from_normal(const Matrix& jtj, double rss,
                                        std::size_t n_data) {
    const std::size_t p = jtj.size();
    std::vector<double> out(p, 0.0);
    const double dof = static_cast<double>(n_data) - static_cast<double>(p);
    if (dof <= 0.0) return out;
    const double sigma2 = rss / dof;
    Matrix chol = jtj;
    if (!cholesky(chol, 0.0)) {
        std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
        return out;
    }
    for (std::size_t k = 0; k < p; ++k) {
        std::vector<double> e(p, 0.0);
        e[k] = 1.0;
        const std::vector<double> col = cholesky_solve(chol, e);
        out[k] = std::sqrt(std::max(0.0, sigma2 * col[k]));
    }
    return out;
}

}  // namespace

FitResult least_squares(const FitModel& model, std::span<const double> data,
                        std::span<const double> initial,
                        const std::vector<std::string>& names,
                        const LeastSquaresOptions& options) {
    const std::size_t n_params = initial.size();
    if (n_params == 0 || names.size() != n_params) {
        throw ValidationError("least_squares: parameter names and guess sizes differ");
    }
    if (data.size() < 2 * n_params) {
        throw ValidationError("least_squares: needs >= 2x more data points than parameters");
    }
    for (double p : initial) finite_or_throw(p, "least_squares initial guess");
    if (!options.lower.empty() && options.lower.size() != n_params) {
        throw ValidationError("least_squares: lower bound size mismatch");
    }
    if (!options.upper.empty() && options.upper.size() != n_params) {
        throw ValidationError("least_squares: upper bound size mismatch");
    }
    for (std::size_t k = 0; k < n_params; ++k) {
        if (!options.lower.empty() && initial[k] < options.lower[k]) {
            throw ValidationError("least_squares: initial guess below lower bound");
        }
        if (!options.upper.empty() && initial[k] > options.upper[k]) {
            throw ValidationError("least_squares: initial guess above upper bound");
        }
    }

    std::vector<double> p(initial.begin(), initial.end());
    std::vector<double> f = model(p);
    if (f.size() != data.size()) {
        throw ValidationError("least_squares: model sample count differs from data");
    }
    double rss = residual_sum_of_squares(data, f);

    FitResult result;
    result.names = names;
    double damping = 1e-3;
    int iteration = 0;
    bool converged = false;

    while (iteration < options.max_iterations) {
        ++iteration;
        const Matrix j = jacobian(model, p, f, options.fd_rel_step);
        const Matrix jtj = normal_matrix(j);
        throw_if_rank_deficient(jtj);

        std::vector<double> grad(n_params, 0.0);  // J^T r
        for (std::size_t k = 0; k < n_params; ++k) {
            for (std::size_t i = 0; i < data.size(); ++i) {
                grad[k] += j[k][i] * (data[i] - f[i]);
            }
        }

        bool accepted = false;
        double step_scale = 0.0;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Matrix damped = jtj;
            for (std::size_t k = 0; k < n_params; ++k) {
                damped[k][k] += damping * jtj[k][k];
            }
            Matrix chol = damped;
            if (!cholesky(chol, 0.0)) {
                damping *= 10.0;
                continue;
            }
            const std::vector<double> delta = cholesky_solve(chol, grad);
            std::vector<double> trial = p;
            for (std::size_t k = 0; k < n_params; ++k) trial[k] += delta[k];
            clamp_to_bounds(trial, options);

            const std::vector<double> f_trial = model(trial);
            const double rss_trial = residual_sum_of_squares(data, f_trial);
            if (rss_trial <= rss) {
                step_scale = 0.0;
                for (std::size_t k = 0; k < n_params; ++k) {
                    step_scale = std::max(step_scale,
                                          std::abs(trial[k] - p[k]) /
                                              std::max(std::abs(p[k]), 1e-30));
                }
                p = trial;
                f = f_trial;
                rss = rss_trial;
                damping = std::max(damping / 3.0, 1e-14);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if (!accepted) {
            // No descent direction left: already at a stationary point.
            converged = true;
            break;
        }
        if (step_scale < options.step_tol) {
            converged = true;
            break;
        }
    }

    result.params = p;
    result.rss = rss;
    result.iterations = iteration;
    result.converged = converged;
    const Matrix j = jacobian(model, p, f, options.fd_rel_step);
    result.stderrs = stderrs_from_normal(normal_matrix(j), rss, data.size());
    return result;
}

FitResult fit_cavity_lorentzian(std::span<const double> energy_mev,
                                std::span<const double> reflectivity) {
    if (energy_mev.size() != reflectivity.size() || energy_mev.size() < 6) {
        throw ValidationError("fit_cavity_lorentzian: needs >= 6 (E, R) samples");
    }
    const auto it = std::min_element(reflectivity.begin(), reflectivity.end());
    const std::size_t i_min = static_cast<std::size_t>(it - reflectivity.begin());
    const double e0 = energy_mev[i_min];
    const double depth0 = std::clamp(1.0 - *it, 1e-6, 1.0);

    // Width guess from the half-depth crossings around the dip.
    const double half_level = 1.0 - 0.5 * depth0;
    double e_lo = energy_mev.front(), e_hi = energy_mev.back();
    for (std::size_t i = i_min; i-- > 0;) {
        if (reflectivity[i] > half_level) {
            e_lo = energy_mev[i];
            break;
        }
    }
    for (std::size_t i = i_min + 1; i < energy_mev.size(); ++i) {
        if (reflectivity[i] > half_level) {
            e_hi = energy_mev[i];
            break;
        }
    }
    const double width0 = std::max(e_hi - e_lo, 1e-6);
    const double q0 = std::clamp(e0 / width0, 0.5, 1e4);

    std::vector<double> grid(energy_mev.begin(), energy_mev.end());
    const FitModel model = [grid](std::span<const double> p) {
        std::vector<double> r(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            r[i] = 1.0 - p[2] * lorentzian(grid[i] - p[0], p[0] / p[1]);
        }
        return r;
    };

    LeastSquaresOptions options;
    options.lower = {grid.front(), 0.1, 0.0};
    options.upper = {grid.back(), 1e6, 1.5};
    const std::vector<double> initial{e0, q0, depth0};
    return least_squares(model, reflectivity, initial,
                         {"E_cav_meV", "Q_cav", "depth"}, options);
}

FitResult fit_stark(std::span<const double> bias_v, std::span<const double> peak_mev,
                    double v0_v) {
    if (bias_v.size() != peak_mev.size() || bias_v.size() < 3) {
        throw ValidationError("fit_stark: needs >= 3 (V, E) samples");
    }
    const double n = static_cast<double>(bias_v.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < bias_v.size(); ++i) {
        sx += bias_v[i] - v0_v;
        sy += peak_mev[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < bias_v.size(); ++i) {
        const double dx = (bias_v[i] - v0_v) - mx;
        sxx += dx * dx;
        sxy += dx * (peak_mev[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw ValidationError("fit_stark: bias values are all identical");
    }
    const double kappa = sxy / sxx;
    const double e0 = my - kappa * mx;  // value at V = V0

    double rss = 0.0;
    for (std::size_t i = 0; i < bias_v.size(); ++i) {
        const double r = peak_mev[i] - (e0 + kappa * (bias_v[i] - v0_v));
        rss += r * r;
    }
    const double sigma2 = bias_v.size() > 2 ? rss / (n - 2.0) : 0.0;

    FitResult result;
    result.names = {"E0_meV", "kappa_meV_per_V"};
    result.params = {e0, kappa};
    result.stderrs = {std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx)),
                      std::sqrt(sigma2 / sxx)};
    result.rss = rss;
    result.iterations = 1;
    result.converged = true;
    return result;
}

FitResult fit_threshold(std::span<const double> j_a_cm2,
                        std::span<const double> flux_norm,
                        const std::function<double(double)>& fp_of_j) {
    if (j_a_cm2.size() != flux_norm.size() || j_a_cm2.size() < 3) {
        throw ValidationError("fit_threshold: needs >= 3 (J, flux) samples");
    }
    const std::size_t n = j_a_cm2.size();
    std::vector<double> drive(n);  // g_i = J_i FP(J_i), fixed across trials
    double g_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(j_a_cm2[i] > 0.0)) {
            throw ValidationError("fit_threshold: current densities must be > 0");
        }
        drive[i] = j_a_cm2[i] * fp_of_j(j_a_cm2[i]);
        g_max = std::max(g_max, drive[i]);
    }
    if (!(g_max > 0.0)) {
        throw NumericalError("fit_threshold: Purcell factor vanished on all data");
    }

    // Data normalized to unit max; scale invariance of the fit.
    const double flux_max = *std::max_element(flux_norm.begin(), flux_norm.end());
    if (!(flux_max > 0.0)) {
        throw ValidationError("fit_threshold: flux must contain positive values");
    }
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = flux_norm[i] / flux_max;

    auto rss_at = [&](double j_th) {
        double peak = 0.0;
        for (double g : drive) {
            if (g >= j_th) return std::numeric_limits<double>::infinity();
            peak = std::max(peak, g / (j_th - g));
        }
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double model = drive[i] / (j_th - drive[i]) / peak;
            const double r = data[i] - model;
            rss += r * r;
        }
        return rss;
    };

    // Coarse log-spaced bracket above the largest admissible pole.
    const int n_scan = 400;
    const double lo = g_max * (1.0 + 1e-9);
    const double ratio = std::pow(1e3, 1.0 / n_scan);
    double best_rss = std::numeric_limits<double>::infinity();
    int best_index = 0;
    std::vector<double> trial(n_scan + 1);
    for (int i = 0; i <= n_scan; ++i) {
        trial[i] = lo * std::pow(ratio, i);
        const double rss = rss_at(trial[i]);
        if (rss < best_rss) {
            best_rss = rss;
            best_index = i;
        }
    }
    if (!std::isfinite(best_rss)) {
        throw NumericalError("fit_threshold: no admissible threshold found");
    }
    double a = trial[std::max(best_index - 1, 0)];
    double b = trial[std::min(best_index + 1, n_scan)];

    // Golden-section refinement.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = rss_at(c), fd = rss_at(d);
    int iterations = 0;
    while ((b - a) > 1e-10 * b && iterations < 300) {
        ++iterations;
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = rss_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = rss_at(d);
        }
    }
    const double j_th = 0.5 * (a + b);
    const double rss = rss_at(j_th);

    // Linearized standard error from the 1-column Jacobian (central difference).
    const double h = 1e-6 * j_th;
    std::vector<double> m_plus(n), m_minus(n);
    auto fill_model = [&](double t, std::vector<double>& out) {
        double peak = 0.0;
        for (double g : drive) peak = std::max(peak, g / (t - g));
        for (std::size_t i = 0; i < n; ++i) out[i] = drive[i] / (t - drive[i]) / peak;
    };
    fill_model(j_th + h, m_plus);
    fill_model(j_th - h, m_minus);
    double jtj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double deriv = (m_plus[i] - m_minus[i]) / (2.0 * h);
        jtj += deriv * deriv;
    }
    const double sigma2 = n > 1 ? rss / (static_cast<double>(n) - 1.0) : 0.0;

    FitResult result;
    result.names = {"Jth_A_cm2"};
    result.params = {j_th};
    result.stderrs = {jtj > 0.0 ? std::sqrt(sigma2 / jtj) : 0.0};
    result.rss = rss;
    result.iterations = iterations;
    result.converged = iterations < 300;
    return result;
}

FitResult fit_qe_slope(std::span<const double> current_a,
                       std::span<const double> power_w, Energy photon) {
    if (current_a.size() != power_w.size() || current_a.empty()) {
        throw ValidationError("fit_qe_slope: needs >= 1 (I, P) sample");
    }
    const double e_j = mev_to_joule(photon.mev);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < current_a.size(); ++i) {
        if (!(current_a[i] > 0.0)) {
            throw ValidationError("fit_qe_slope: currents must be > 0");
        }
        const double x = current_a[i] / constants::elementary_charge;  // electrons/s
        const double y = power_w[i] / e_j;                             // photons/s
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < current_a.size(); ++i) {
        const double x = current_a[i] / constants::elementary_charge;
        const double r = power_w[i] / e_j - slope * x;
        rss += r * r;
    }
    const double n = static_cast<double>(current_a.size());
    const double sigma2 = n > 1 ? rss / (n - 1.0) : 0.0;

    FitResult result;
    result.names = {"eta_qe"};
    result.params = {slope};
    result.stderrs = {std::sqrt(sigma2 / sxx)};
    result.rss = rss;
    result.iterations = 1;
    result.converged = true;
    return result;
}

std::string to_json(const FitResult& result) {
    std::string json = "{\"params\":{";
    for (std::size_t k = 0; k < result.names.size(); ++k) {
        if (k) json += ',';
        json += '"' + result.names[k] + "\":" + format_double(result.params[k]);
    }
    json += "},\"stderr\":{";
    for (std::size_t k = 0; k < result.names.size(); ++k) {
        if (k) json += ',';
        json += '"' + result.names[k] + "\":" + format_double(result.stderrs[k]);
    }
    json += "},\"rss\":" + format_double(result.rss);
    json += ",\"iterations\":" + std::to_string(result.iterations);
    json += ",\"converged\":";
    json += result.converged ? "true" : "false";
    json += '}';
    return json;
}

}  // namespace patchlum
