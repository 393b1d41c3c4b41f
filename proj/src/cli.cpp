#include "patchlum/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "patchlum/config.hpp"
#include "patchlum/csv.hpp"
#include "patchlum/fitting.hpp"
#include "patchlum/format.hpp"
#include "patchlum/peaks.hpp"
#include "patchlum/spectra.hpp"

namespace patchlum {

namespace {

namespace fs = std::filesystem;

// Minimal ordered-JSON builder; all numbers go through format_double so that
// identical inputs give byte-identical files.
class JsonObject {
public:
    JsonObject& field(const std::string& key, double value) {
        return raw(key, format_double(value));
    }
    JsonObject& field(const std::string& key, int value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const std::string& key, bool value) {
        return raw(key, value ? "true" : "false");
    }
    JsonObject& field(const std::string& key, const std::string& value) {
        return raw(key, '"' + value + '"');
    }
    JsonObject& field(const std::string& key, const char* value) {
        return field(key, std::string(value));
    }
    JsonObject& field_strings(const std::string& key,
                              const std::vector<std::string>& values) {
        std::string array = "[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) array += ',';
            array += '"' + values[i] + '"';
        }
        array += ']';
        return raw(key, array);
    }
    JsonObject& raw(const std::string& key, const std::string& value) {
        if (!body_.empty()) body_ += ',';
        body_ += '"' + key + "\":" + value;
        return *this;
    }
    std::string str() const { return '{' + body_ + '}'; }

private:
    std::string body_;
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir{"."};
};

DeviceConfig load_config(const CommonOptions& options) {
    if (options.config_path.empty()) return default_config();
    return parse_config(options.config_path);
}

std::vector<std::string> csv_metadata(const DeviceConfig& config) {
    std::string assumed = "assumed=";
    for (std::size_t i = 0; i < config.assumed.size(); ++i) {
        if (i) assumed += ',';
        assumed += config.assumed[i];
    }
    return {"config_digest=" + config.digest, assumed};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open '" + path.string() + "' for writing");
    file << text << '\n';
    if (!file) throw ValidationError("write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const CommonOptions& options) {
    fs::path dir(options.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

void emit_summary(const fs::path& dir, const std::string& name,
                  const JsonObject& summary) {
    const std::string text = summary.str();
    write_text(dir / name, text);
    std::cout << text << std::endl;
}

// Tiny polyline quick-look; the CSV stays the data contract.
void write_svg_curve(const fs::path& path, std::span<const double> x,
                     std::span<const double> y, const std::string& x_label,
                     const std::string& y_label) {
    if (x.size() < 2) return;
    const double x_min = x.front(), x_max = x.back();
    double y_min = y[0], y_max = y[0];
    for (double v : y) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    if (!(x_max > x_min)) return;
    const double w = 640.0, h = 400.0, margin = 50.0;
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n"
        "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n<polyline fill=\"none\" "
        "stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double px = margin + (x[i] - x_min) / (x_max - x_min) * (w - 2 * margin);
        const double py = h - margin - (y[i] - y_min) / (y_max - y_min) * (h - 2 * margin);
        svg += format_double(px) + ',' + format_double(py) + ' ';
    }
    svg += "\"/>\n<text x=\"320\" y=\"392\" text-anchor=\"middle\" font-size=\"12\">" +
           x_label + "</text>\n<text x=\"12\" y=\"200\" font-size=\"12\" "
           "transform=\"rotate(-90 12 200)\" text-anchor=\"middle\">" +
           y_label + "</text>\n</svg>";
    write_text(path, svg);
}

std::optional<BiasCurrentMap> load_iv_map(const std::string& path) {
    if (path.empty()) return std::nullopt;
    const MeasurementTable table = ingest_csv(path, schema::iv);
    const auto bias = table.column("bias_V");
    const auto current = table.column("current_mA");
    return BiasCurrentMap(std::vector<double>(bias.begin(), bias.end()),
                          std::vector<double>(current.begin(), current.end()));
}

// Purcell factor vs current density: table-driven when an IV map is given
// (holding its endpoint value outside the measured range), otherwise constant
// at the chosen bias. Mesa devices have no cavity enhancement at all.
struct DriveModel {
    std::function<double(double)> fp_of_j;
    bool bias_dependent{};
};

DriveModel make_drive_model(const DeviceConfig& config, const PurcellModel& purcell,
                            const std::optional<BiasCurrentMap>& map, double bias_v,
                            bool mesa) {
    if (mesa) {
        return {[](double) { return 1.0; }, false};
    }
    if (map.has_value()) {
        const double i_lo = map->min_current_ma();
        const double i_hi = map->max_current_ma();
        const BiasCurrentMap iv = *map;
        const PatchCavity cavity = config.cavity;
        return {[=, model = purcell](double j_a_cm2) {
                    double i_ma = density_to_current_a(CurrentDensity(j_a_cm2), cavity) * 1e3;
                    i_ma = std::clamp(i_ma, i_lo, i_hi);
                    return model.factor_at_bias(iv.bias_v(i_ma));
                },
                true};
    }
    const double fp = purcell.factor_at_bias(bias_v);
    return {[fp](double) { return fp; }, false};
}

struct LiOptions {
    double jmax_ka{20.0};
    int points{200};
    double bias{0.0};
    bool bias_given{};
    std::string iv;
    bool mesa{};
    double collection{0.0};
    bool collection_given{};
    double qel{0.0};
    bool svg{};
};

int cmd_simulate_li(const CommonOptions& common, const LiOptions& o) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const double q_el = o.qel > 0.0 ? o.qel : config.q_el;
    const CavityMode mode = config_cavity_mode(config);
    const PurcellModel purcell(config.emitter, mode, q_el);
    const double bias = o.bias_given ? o.bias : config.emitter.v0_v;
    const auto map = load_iv_map(o.iv);
    // Mesa edge emission collects far less light than the surface-emitting array.
    const double eta_coll = o.collection_given ? o.collection : (o.mesa ? 0.01 : 1.0);
    if (!(eta_coll > 0.0 && eta_coll <= 1.0)) {
        throw ValidationError("--collection: must be in (0, 1]");
    }
    if (o.points < 2) throw ValidationError("--points: must be >= 2");
    if (!(o.jmax_ka > 0.0)) throw ValidationError("--jmax: must be > 0");
    const DriveModel drive = make_drive_model(config, purcell, map, bias, o.mesa);

    const double j_th = threshold_current_density(config.cascade);
    const double j_max = o.jmax_ka * 1e3;
    const EffectiveThreshold j_th_eff = effective_threshold(j_th, drive.fp_of_j, j_max);

    double j_hi = j_max;
    if (j_th_eff.found) j_hi = std::min(j_hi, 0.995 * j_th_eff.j_a_cm2);
    std::vector<double> j_grid(static_cast<std::size_t>(o.points));
    for (int i = 0; i < o.points; ++i) {
        j_grid[static_cast<std::size_t>(i)] = j_hi * i / (o.points - 1.0);
    }
    const std::vector<double> s =
        photon_density_curve(config.cascade, drive.fp_of_j, j_grid);

    const Energy photon = o.mesa ? el_peak_energy(config.emitter, bias) : mode.e_cav;
    std::vector<double> j_ka(j_grid.size()), p_w(j_grid.size());
    for (std::size_t i = 0; i < j_grid.size(); ++i) {
        j_ka[i] = j_grid[i] * 1e-3;
        p_w[i] = eta_coll * emitted_power_w(s[i], photon, config.cascade.gamma_r_per_s,
                                            mode.v_cav_um3);
    }
    write_csv(out / "li_curve.csv", "J_kA_cm2,S_cm3,P_W",
              std::vector<std::vector<double>>{j_ka, s, p_w}, csv_metadata(config));
    if (o.svg) write_svg_curve(out / "li_curve.svg", j_ka, p_w, "J (kA/cm2)", "P (W)");

    JsonObject summary;
    summary.field("config_digest", config.digest)
        .field_strings("assumed", config.assumed)
        .field("mesa", o.mesa)
        .field("collection_efficiency", eta_coll)
        .field("bias_V", bias)
        .field("bias_dependent_purcell", drive.bias_dependent)
        .field("F_P", purcell.coefficient())
        .field("purcell_factor_at_bias", o.mesa ? 1.0 : purcell.factor_at_bias(bias))
        .field("Jth_kA_cm2", j_th * 1e-3);
    if (j_th_eff.found) {
        summary.field("Jth_eff_kA_cm2", j_th_eff.j_a_cm2 * 1e-3);
    } else {
        summary.raw("Jth_eff_kA_cm2", "null");
    }
    summary.field("points", o.points);
    emit_summary(out, "li_summary.json", summary);
    return 0;
}

struct SpectrumOptions {
    double bias{0.0};
    bool bias_given{};
    int points{4001};
    bool svg{};
};

int cmd_simulate_spectrum(const CommonOptions& common, const SpectrumOptions& o) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const CavityMode mode = config_cavity_mode(config);
    const double bias = o.bias_given ? o.bias : config.emitter.v0_v;
    const double e_el = el_peak_energy(config.emitter, bias).mev;
    if (o.points < 2000) {
        throw ValidationError("--points: FWHM extraction needs >= 2000 grid points");
    }

    // Grid spans >= 10 combined linewidths past both peaks.
    const double combined = config.emitter.de_el_mev + mode.de_cav.mev;
    const double center = 0.5 * (e_el + mode.e_cav.mev);
    const double half_span = 10.0 * combined + 0.5 * std::abs(e_el - mode.e_cav.mev);
    const std::vector<double> grid =
        energy_grid(center, half_span, static_cast<std::size_t>(o.points));

    const EmissionSpectrum filtered = filtered_spectrum(config.emitter, bias, mode, grid);
    const std::vector<double> mesa = mesa_spectrum(config.emitter, bias, grid);
    const PeakAnalysis mesa_peak = analyze_single_peak(grid, mesa);

    write_csv(out / "spectrum.csv", schema::spectrum,
              std::vector<std::vector<double>>{filtered.energy_mev, filtered.intensity},
              csv_metadata(config));
    write_csv(out / "mesa_spectrum.csv", schema::spectrum,
              std::vector<std::vector<double>>{filtered.energy_mev, mesa},
              csv_metadata(config));
    if (o.svg) {
        write_svg_curve(out / "spectrum.svg", filtered.energy_mev, filtered.intensity,
                        "E (meV)", "intensity");
    }

    JsonObject summary;
    summary.field("config_digest", config.digest)
        .field_strings("assumed", config.assumed)
        .field("bias_V", bias)
        .field("E_EL_meV", e_el)
        .field("E_cav_meV", mode.e_cav.mev)
        .field("detuning_meV", e_el - mode.e_cav.mev)
        .field("peak_meV", filtered.peak_mev)
        .field("fwhm_meV", filtered.fwhm_mev)
        .field("quality_factor", filtered.quality)
        .field("mesa_fwhm_meV", mesa_peak.fwhm)
        .field("narrowing_factor", mesa_peak.fwhm / filtered.fwhm_mev);
    emit_summary(out, "spectrum_summary.json", summary);
    return 0;
}

struct FarfieldOptions {
    double z{0.0};
    bool z_given{};
    double extent{0.0};
    bool extent_given{};
    double step{0.0};
    bool step_given{};
};

int cmd_simulate_farfield(const CommonOptions& common, const FarfieldOptions& o) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const ArrayGeometry geometry = config_array_geometry(config);
    const double z = o.z_given ? o.z : config.farfield.z_mm;
    const double extent = o.extent_given ? o.extent : config.farfield.grid_mm;
    const double step = o.step_given ? o.step : config.farfield.step_mm;

    const FarFieldMap map = intensity_map(geometry, z, extent, step);
    const double dir = directivity(geometry);

    const std::size_t n = map.x_mm.size();
    std::vector<double> xs(n * n), ys(n * n);
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            xs[iy * n + ix] = map.x_mm[ix];
            ys[iy * n + ix] = map.y_mm[iy];
        }
    }
    write_csv(out / "farfield_map.csv", schema::map,
              std::vector<std::vector<double>>{xs, ys, map.intensity},
              csv_metadata(config));

    JsonObject summary;
    summary.field("config_digest", config.digest)
        .field_strings("assumed", config.assumed)
        .field("z_mm", z)
        .field("lambda_um", geometry.lambda_um)
        .field("dx_fwhm_mm", map.dx_fwhm_mm)
        .field("dy_fwhm_mm", map.dy_fwhm_mm)
        .field("theta_div_x_deg", map.theta_div_x_deg)
        .field("theta_div_y_deg", map.theta_div_y_deg)
        .field("directivity", dir)
        .field("element_pattern", to_string(geometry.element))
        .field("coherence_scale", geometry.coherence_scale)
        .field("farfield_ok", map.farfield_ok);
    emit_summary(out, "farfield_summary.json", summary);
    return 0;
}

struct PurcellOptions {
    double vmin{0.0};
    double vmax{0.0};
    bool range_given{};
    int points{401};
    std::string iv;
    double qel{0.0};
    bool svg{};
};

int cmd_simulate_purcell(const CommonOptions& common, const PurcellOptions& o) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const double q_el = o.qel > 0.0 ? o.qel : config.q_el;
    const PurcellModel purcell(config.emitter, config_cavity_mode(config), q_el);
    double vmin = o.vmin, vmax = o.vmax;
    if (!o.range_given) {
        vmin = config.emitter.v0_v - 2.0;
        vmax = config.emitter.v0_v + 2.0;
    }
    if (!(vmax > vmin) || o.points < 2) {
        throw ValidationError("simulate purcell: needs vmax > vmin and points >= 2");
    }

    std::vector<double> bias(static_cast<std::size_t>(o.points));
    std::vector<double> detuning(bias.size()), factor(bias.size());
    for (int i = 0; i < o.points; ++i) {
        const double v = vmin + (vmax - vmin) * i / (o.points - 1.0);
        bias[static_cast<std::size_t>(i)] = v;
        detuning[static_cast<std::size_t>(i)] =
            detuning_mev(config.emitter, v, purcell.mode());
        factor[static_cast<std::size_t>(i)] = purcell.factor_at_bias(v);
    }
    write_csv(out / "purcell_curve.csv", "bias_V,detuning_meV,purcell_factor",
              std::vector<std::vector<double>>{bias, detuning, factor},
              csv_metadata(config));
    if (o.svg) {
        write_svg_curve(out / "purcell_curve.svg", bias, factor, "V (V)",
                        "purcell factor");
    }

    const auto map = load_iv_map(o.iv);
    if (map.has_value()) {
        const auto fp_of_j = purcell_vs_drive(purcell, *map, config.cavity);
        const double j_lo =
            current_to_density(map->min_current_ma() * 1e-3, config.cavity).a_cm2;
        const double j_hi =
            current_to_density(map->max_current_ma() * 1e-3, config.cavity).a_cm2;
        std::vector<double> j_ka(bias.size()), fp_j(bias.size());
        for (int i = 0; i < o.points; ++i) {
            const double j = j_lo + (j_hi - j_lo) * i / (o.points - 1.0);
            j_ka[static_cast<std::size_t>(i)] = j * 1e-3;
            fp_j[static_cast<std::size_t>(i)] = fp_of_j(j);
        }
        write_csv(out / "purcell_vs_j.csv", "J_kA_cm2,purcell_factor",
                  std::vector<std::vector<double>>{j_ka, fp_j}, csv_metadata(config));
    }

    JsonObject summary;
    summary.field("config_digest", config.digest)
        .field_strings("assumed", config.assumed)
        .field("F_P", purcell.coefficient())
        .field("combined_Q", purcell.combined_q())
        .field("linewidth_meV", purcell.linewidth_mev())
        .field("Q_EL_used", q_el);
    if (config.emitter.kappa_mev_per_v != 0.0) {
        summary.field("alignment_bias_V",
                      alignment_bias_v(config.emitter, purcell.mode()));
    } else {
        summary.raw("alignment_bias_V", "null");
    }
    emit_summary(out, "purcell_summary.json", summary);
    return 0;
}

void emit_fit(const fs::path& out, const std::string& name, const FitResult& fit,
              const DeviceConfig& config, const JsonObject& extra) {
    std::string text = to_json(fit);
    // Merge run metadata into the top-level object.
    text.pop_back();
    const std::string extra_body = extra.str();
    if (extra_body.size() > 2) text += ',' + extra_body.substr(1, extra_body.size() - 2);
    JsonObject meta;
    meta.field("config_digest", config.digest).field_strings("assumed", config.assumed);
    const std::string meta_body = meta.str();
    text += ',' + meta_body.substr(1, meta_body.size() - 2) + '}';
    write_text(out / name, text);
    std::cout << text << std::endl;
}

int cmd_fit_lorentzian(const CommonOptions& common, const std::string& data_path) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const MeasurementTable table = ingest_csv(data_path, schema::reflectivity);
    const FitResult fit =
        fit_cavity_lorentzian(table.column("energy_meV"), table.column("reflectivity"));
    emit_fit(out, "fit_lorentzian.json", fit, config, JsonObject{});
    if (!fit.converged) throw NumericalError("fit lorentzian: did not converge");
    return 0;
}

int cmd_fit_stark(const CommonOptions& common, const std::string& data_path) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const MeasurementTable table = ingest_csv(data_path, schema::stark);
    const FitResult fit = fit_stark(table.column("bias_V"), table.column("peak_meV"),
                                    config.emitter.v0_v);
    JsonObject extra;
    extra.field("V0_V", config.emitter.v0_v);
    emit_fit(out, "fit_stark.json", fit, config, extra);
    return 0;
}

struct ThresholdOptions {
    std::string data;
    std::string iv;
    double bias{0.0};
    bool bias_given{};
    double qel{0.0};
};

int cmd_fit_threshold(const CommonOptions& common, const ThresholdOptions& o) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const MeasurementTable table = ingest_csv(o.data, schema::flux);
    const auto j_ka = table.column("J_kA_cm2");
    std::vector<double> j(j_ka.size());
    for (std::size_t i = 0; i < j.size(); ++i) j[i] = j_ka[i] * 1e3;

    const double q_el = o.qel > 0.0 ? o.qel : config.q_el;
    const PurcellModel purcell(config.emitter, config_cavity_mode(config), q_el);
    const double bias = o.bias_given ? o.bias : config.emitter.v0_v;
    const auto map = load_iv_map(o.iv);
    const DriveModel drive = make_drive_model(config, purcell, map, bias, false);

    const FitResult fit = fit_threshold(j, table.column("flux_norm"), drive.fp_of_j);
    JsonObject extra;
    extra.field("Jth_kA_cm2", fit.params[0] * 1e-3)
        .field("bias_dependent_purcell", drive.bias_dependent);
    emit_fit(out, "fit_threshold.json", fit, config, extra);
    if (!fit.converged) throw NumericalError("fit threshold: did not converge");
    return 0;
}

int cmd_fit_qe(const CommonOptions& common, const std::string& data_path) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const MeasurementTable table = ingest_csv(data_path, schema::li);
    const auto current_ma = table.column("current_mA");
    const auto power_uw = table.column("power_uW");
    std::vector<double> current_a(current_ma.size()), power_w(power_uw.size());
    for (std::size_t i = 0; i < current_a.size(); ++i) {
        current_a[i] = current_ma[i] * 1e-3;
        power_w[i] = power_uw[i] * 1e-6;
    }
    const FitResult fit = fit_qe_slope(current_a, power_w, config.emitter.e0);
    JsonObject extra;
    extra.field("photon_energy_meV", config.emitter.e0.mev);
    emit_fit(out, "fit_qe.json", fit, config, extra);
    return 0;
}

int cmd_report_device(const CommonOptions& common) {
    const DeviceConfig config = load_config(common);
    const fs::path out = prepare_out_dir(common);
    const CavityMode mode = config_cavity_mode(config);
    const PurcellModel purcell = config_purcell_model(config);
    const double j_th = threshold_current_density(config.cascade);
    const double fp_at_v0 = purcell.factor_at_bias(config.emitter.v0_v);

    JsonObject notes;
    for (const auto& [field, note] : assumption_notes()) notes.field(field, note);

    JsonObject summary;
    summary.field("config_digest", config.digest)
        .field_strings("assumed", config.assumed)
        .field("E_cav_meV", mode.e_cav.mev)
        .field("lambda_cav_um", mode.lambda_cav.um)
        .field("dE_cav_meV", mode.de_cav.mev)
        .field("V_cav_um3", mode.v_cav_um3)
        .field("electrical_area_um2", electrical_area_um2(config.cavity))
        .field("optical_area_um2", optical_area_um2(config.cavity))
        .field("fill_factor", fill_factor(config.cavity))
        .field("E_EL_at_V0_meV", config.emitter.e0.mev)
        .field("dE_EL_meV", config.emitter.de_el_mev)
        .field("combined_Q", purcell.combined_q())
        .field("linewidth_meV", purcell.linewidth_mev())
        .field("F_P", purcell.coefficient())
        .field("purcell_factor_at_V0", fp_at_v0)
        .field("tau_eff_ps", tau_eff_s(config.cascade) * 1e12)
        .field("sigma_V_cm3_s", config.cascade.sigma_v_cm3_s)
        .field("Jth_kA_cm2", j_th * 1e-3)
        .field("Jth_eff_at_V0_kA_cm2", j_th / fp_at_v0 * 1e-3);
    if (config.emitter.kappa_mev_per_v != 0.0) {
        summary.field("alignment_bias_V", alignment_bias_v(config.emitter, mode));
    } else {
        summary.raw("alignment_bias_V", "null");
    }
    summary.raw("assumption_notes", notes.str());
    emit_summary(out, "device_report.json", summary);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"patchlum: Purcell-enhanced patch-antenna emitter toolkit"};
    app.require_subcommand(1);

    CommonOptions common;
    LiOptions li_opt;
    SpectrumOptions spectrum_opt;
    FarfieldOptions farfield_opt;
    PurcellOptions purcell_opt;
    std::string lorentzian_data, stark_data, qe_data;
    ThresholdOptions threshold_opt;
    int exit_code = 0;
    std::function<void()> action;

    auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "device config JSON");
        cmd->add_option("--out", common.out_dir, "output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "forward models");
    simulate->require_subcommand(1);

    auto* li = simulate->add_subcommand("li", "photon density and power vs J");
    add_common(li);
    li->add_option("--jmax", li_opt.jmax_ka, "max current density (kA/cm^2)");
    li->add_option("--points", li_opt.points, "grid points");
    auto* li_bias = li->add_option("--bias", li_opt.bias, "fixed bias for FP (V)");
    li->add_option("--iv", li_opt.iv, "bias_V,current_mA table for FP(J)");
    li->add_flag("--mesa", li_opt.mesa, "mesa baseline: FP = 1, low collection");
    auto* li_coll = li->add_option("--collection", li_opt.collection,
                                   "collection efficiency in (0, 1]");
    li->add_option("--purcell-qel", li_opt.qel, "override Q_EL in the Purcell Q");
    li->add_flag("--svg", li_opt.svg, "emit quick-look SVG");
    li->callback([&, li_bias, li_coll] {
        li_opt.bias_given = li_bias->count() > 0;
        li_opt.collection_given = li_coll->count() > 0;
        action = [&] { exit_code = cmd_simulate_li(common, li_opt); };
    });

    auto* spectrum = simulate->add_subcommand("spectrum", "mesa and in-cavity spectra");
    add_common(spectrum);
    auto* spectrum_bias = spectrum->add_option("--bias", spectrum_opt.bias, "bias (V)");
    spectrum->add_option("--points", spectrum_opt.points, "grid points (>= 2000)");
    spectrum->add_flag("--svg", spectrum_opt.svg, "emit quick-look SVG");
    spectrum->callback([&, spectrum_bias] {
        spectrum_opt.bias_given = spectrum_bias->count() > 0;
        action = [&] { exit_code = cmd_simulate_spectrum(common, spectrum_opt); };
    });

    auto* farfield = simulate->add_subcommand("farfield", "detection-plane map");
    add_common(farfield);
    auto* ff_z = farfield->add_option("--z", farfield_opt.z, "detector distance (mm)");
    auto* ff_extent =
        farfield->add_option("--extent", farfield_opt.extent, "map half-extent (mm)");
    auto* ff_step = farfield->add_option("--step", farfield_opt.step, "map step (mm)");
    farfield->callback([&, ff_z, ff_extent, ff_step] {
        farfield_opt.z_given = ff_z->count() > 0;
        farfield_opt.extent_given = ff_extent->count() > 0;
        farfield_opt.step_given = ff_step->count() > 0;
        action = [&] { exit_code = cmd_simulate_farfield(common, farfield_opt); };
    });

    auto* purcell = simulate->add_subcommand("purcell", "Purcell factor vs bias");
    add_common(purcell);
    auto* purcell_vmin = purcell->add_option("--vmin", purcell_opt.vmin, "sweep start (V)");
    purcell->add_option("--vmax", purcell_opt.vmax, "sweep end (V)");
    purcell->add_option("--points", purcell_opt.points, "sweep points");
    purcell->add_option("--iv", purcell_opt.iv, "bias_V,current_mA table for FP(J) output");
    purcell->add_option("--purcell-qel", purcell_opt.qel, "override Q_EL in the Purcell Q");
    purcell->add_flag("--svg", purcell_opt.svg, "emit quick-look SVG");
    purcell->callback([&, purcell_vmin] {
        purcell_opt.range_given = purcell_vmin->count() > 0;
        action = [&] { exit_code = cmd_simulate_purcell(common, purcell_opt); };
    });

    CLI::App* fit = app.add_subcommand("fit", "parameter extraction from data");
    fit->require_subcommand(1);

    auto* lorentzian = fit->add_subcommand("lorentzian", "cavity dip from reflectivity");
    add_common(lorentzian);
    lorentzian->add_option("--data", lorentzian_data, "energy_meV,reflectivity CSV")
        ->required();
    lorentzian->callback([&] {
        action = [&] { exit_code = cmd_fit_lorentzian(common, lorentzian_data); };
    });

    auto* stark = fit->add_subcommand("stark", "Stark slope from EL peaks");
    add_common(stark);
    stark->add_option("--data", stark_data, "bias_V,peak_meV CSV")->required();
    stark->callback([&] {
        action = [&] { exit_code = cmd_fit_stark(common, stark_data); };
    });

    auto* threshold = fit->add_subcommand("threshold", "J_th from normalized flux");
    add_common(threshold);
    threshold->add_option("--data", threshold_opt.data, "J_kA_cm2,flux_norm CSV")
        ->required();
    threshold->add_option("--iv", threshold_opt.iv, "bias_V,current_mA table for FP(J)");
    auto* threshold_bias =
        threshold->add_option("--bias", threshold_opt.bias, "fixed bias for FP (V)");
    threshold->add_option("--purcell-qel", threshold_opt.qel,
                          "override Q_EL in the Purcell Q");
    threshold->callback([&, threshold_bias] {
        threshold_opt.bias_given = threshold_bias->count() > 0;
        action = [&] { exit_code = cmd_fit_threshold(common, threshold_opt); };
    });

    auto* qe = fit->add_subcommand("qe", "quantum efficiency slope from L-I data");
    add_common(qe);
    qe->add_option("--data", qe_data, "current_mA,power_uW CSV")->required();
    qe->callback([&] {
        action = [&] { exit_code = cmd_fit_qe(common, qe_data); };
    });

    CLI::App* report = app.add_subcommand("report", "derived device quantities");
    report->require_subcommand(1);
    auto* device = report->add_subcommand("device", "resolved config and derived values");
    add_common(device);
    device->callback([&] {
        action = [&] { exit_code = cmd_report_device(common); };
    });

    std::vector<const char*> argv;
    argv.push_back("patchlum");
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (action) action();
        return exit_code;
    } catch (const CLI::ParseError& error) {
        if (error.get_exit_code() == 0) {  // --help and friends
            return app.exit(error);
        }
        std::cerr << "error: kind=validation message=\"" << error.what() << "\"\n";
        return 1;
    } catch (const ValidationError& error) {
        std::cerr << "error: kind=validation message=\"" << error.what() << "\"\n";
        return 1;
    } catch (const NumericalError& error) {
        std::cerr << "error: kind=numerical message=\"" << error.what() << "\"\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: kind=internal message=\"" << error.what() << "\"\n";
        return 2;
    }
}

}  // namespace patchlum
