#include "patchlum/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "patchlum/format.hpp"

namespace patchlum {

namespace {

using nlohmann::json;

// Reads one numeric field, falling back to the default and recording the
// assumption when it is absent.
double take_number(const json& section, const std::string& path, const char* key,
                   double fallback, std::vector<std::string>& assumed) {
    if (section.contains(key)) {
        const json& value = section.at(key);
        if (!value.is_number()) {
            throw ValidationError(path + "." + key + ": expected a number");
        }
        return value.get<double>();
    }
    assumed.push_back(path + "." + key);
    return fallback;
}

int take_int(const json& section, const std::string& path, const char* key,
             int fallback, std::vector<std::string>& assumed) {
    if (section.contains(key)) {
        const json& value = section.at(key);
        if (!value.is_number_integer()) {
            throw ValidationError(path + "." + key + ": expected an integer");
        }
        return value.get<int>();
    }
    assumed.push_back(path + "." + key);
    return fallback;
}

std::string take_string(const json& section, const std::string& path, const char* key,
                        const std::string& fallback, std::vector<std::string>& assumed) {
    if (section.contains(key)) {
        const json& value = section.at(key);
        if (!value.is_string()) {
            throw ValidationError(path + "." + key + ": expected a string");
        }
        return value.get<std::string>();
    }
    assumed.push_back(path + "." + key);
    return fallback;
}

void reject_unknown_keys(const json& section, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (const auto& item : section.items()) {
        bool found = false;
        for (const char* key : known) {
            if (item.key() == key) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw ValidationError("unknown config key: " + path + "." + item.key());
        }
    }
}

json section_or_empty(const json& doc, const char* name) {
    if (!doc.contains(name)) return json::object();
    if (!doc.at(name).is_object()) {
        throw ValidationError(std::string("config section '") + name +
                              "' must be an object");
    }
    return doc.at(name);
}

DeviceConfig resolve(const json& doc, const std::string& source) {
    if (!doc.is_object()) {
        throw ValidationError(source + ": config document must be a JSON object");
    }
    for (const auto& item : doc.items()) {
        if (item.key() != "cavity" && item.key() != "emitter" &&
            item.key() != "cascade" && item.key() != "farfield") {
            throw ValidationError("unknown config key: " + item.key());
        }
    }

    DeviceConfig config;
    auto& assumed = config.assumed;

    const json cavity = section_or_empty(doc, "cavity");
    reject_unknown_keys(cavity, "cavity",
                        {"s_um", "H_um", "p_um", "Nx", "Ny", "n_mode", "Q_cav"});
    config.cavity.s_um = take_number(cavity, "cavity", "s_um", 1.4, assumed);
    config.cavity.h_um = take_number(cavity, "cavity", "H_um", 0.75, assumed);
    config.cavity.p_um = take_number(cavity, "cavity", "p_um", 7.0, assumed);
    config.cavity.nx = take_int(cavity, "cavity", "Nx", 10, assumed);
    config.cavity.ny = take_int(cavity, "cavity", "Ny", 10, assumed);
    config.cavity.n_mode = take_number(cavity, "cavity", "n_mode", 3.5714, assumed);
    config.cavity.q_cav = take_number(cavity, "cavity", "Q_cav", 14.4, assumed);
    validate(config.cavity);

    const json emitter = section_or_empty(doc, "emitter");
    reject_unknown_keys(emitter, "emitter",
                        {"E0_meV", "V0_V", "kappa_meV_per_V", "Q_EL", "tau_sp_ns"});
    const double e0 = take_number(emitter, "emitter", "E0_meV", 130.0, assumed);
    if (!(e0 > 0.0)) throw ValidationError("emitter.E0_meV: must be > 0");
    config.emitter.e0 = Energy(e0);
    config.emitter.v0_v = take_number(emitter, "emitter", "V0_V", 4.5, assumed);
    config.emitter.kappa_mev_per_v =
        take_number(emitter, "emitter", "kappa_meV_per_V", 5.0, assumed);
    config.q_el = take_number(emitter, "emitter", "Q_EL", 9.0, assumed);
    if (!(config.q_el > 0.0)) throw ValidationError("emitter.Q_EL: must be > 0");
    config.emitter.de_el_mev = e0 / config.q_el;
    const double tau_sp_ns = take_number(emitter, "emitter", "tau_sp_ns", 50.0, assumed);
    if (!(tau_sp_ns > 0.0)) throw ValidationError("emitter.tau_sp_ns: must be > 0");
    config.emitter.tau_sp_ref = Lifetime(tau_sp_ns * 1e-9);
    config.emitter.e_ref = Energy(e0);
    validate(config.emitter);

    const json cascade = section_or_empty(doc, "cascade");
    reject_unknown_keys(cascade, "cascade",
                        {"Lp_nm", "tau3_ps", "tau2_ps", "tau32_ps", "Gamma_tot_per_s",
                         "radiative_fraction", "Jth_kA_cm2"});
    config.cascade.lp_nm = take_number(cascade, "cascade", "Lp_nm", 50.0, assumed);
    config.cascade.tau3_ps = take_number(cascade, "cascade", "tau3_ps", 1.0, assumed);
    config.cascade.tau2_ps = take_number(cascade, "cascade", "tau2_ps", 0.2, assumed);
    config.cascade.tau32_ps = take_number(cascade, "cascade", "tau32_ps", 2.0, assumed);
    config.cascade.tau_sp_ns = tau_sp_ns;
    config.cascade.gamma_tot_per_s =
        take_number(cascade, "cascade", "Gamma_tot_per_s", 1e12, assumed);
    const double radiative_fraction =
        take_number(cascade, "cascade", "radiative_fraction", 0.8, assumed);
    if (!(radiative_fraction >= 0.0 && radiative_fraction <= 1.0)) {
        throw ValidationError("cascade.radiative_fraction: must be in [0, 1]");
    }
    config.cascade.gamma_r_per_s = radiative_fraction * config.cascade.gamma_tot_per_s;
    config.cascade.gamma_nr_per_s =
        (1.0 - radiative_fraction) * config.cascade.gamma_tot_per_s;
    const double jth_ka = take_number(cascade, "cascade", "Jth_kA_cm2", 25.0, assumed);
    if (!(jth_ka > 0.0)) throw ValidationError("cascade.Jth_kA_cm2: must be > 0");
    config.jth_target_a_cm2 = jth_ka * 1e3;
    // sigma_V exists only through this calibration; the paper quotes the
    // threshold, not the gain cross-section.
    config.cascade.sigma_v_cm3_s =
        calibrate_sigma_v(config.cascade, config.jth_target_a_cm2);
    validate(config.cascade);

    const json farfield = section_or_empty(doc, "farfield");
    reject_unknown_keys(farfield, "farfield",
                        {"z_mm", "grid_mm", "step_mm", "element_pattern",
                         "coherence_scale"});
    config.farfield.z_mm = take_number(farfield, "farfield", "z_mm", 50.0, assumed);
    config.farfield.grid_mm = take_number(farfield, "farfield", "grid_mm", 6.0, assumed);
    config.farfield.step_mm = take_number(farfield, "farfield", "step_mm", 0.05, assumed);
    config.farfield.element = element_pattern_from_string(
        take_string(farfield, "farfield", "element_pattern", "cosine", assumed));
    config.farfield.coherence_scale =
        take_number(farfield, "farfield", "coherence_scale", 1.0, assumed);
    if (!(config.farfield.z_mm > 0.0)) throw ValidationError("farfield.z_mm: must be > 0");
    if (!(config.farfield.grid_mm > 0.0) || !(config.farfield.step_mm > 0.0)) {
        throw ValidationError("farfield.grid_mm/step_mm: must be > 0");
    }
    if (!(config.farfield.coherence_scale > 0.0)) {
        throw ValidationError("farfield.coherence_scale: must be > 0");
    }

    config.digest = fnv1a_hex(canonical_json(config));
    return config;
}

}  // namespace

DeviceConfig parse_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw ValidationError("parse_config: cannot open '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

DeviceConfig parse_config_text(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& error) {
        throw ValidationError(source + ": malformed JSON (" + error.what() + ")");
    }
    return resolve(doc, source);
}

DeviceConfig default_config() { return parse_config_text("{}", "<defaults>"); }

std::string canonical_json(const DeviceConfig& c) {
    std::string out = "{\"cavity\":{";
    out += "\"s_um\":" + format_double(c.cavity.s_um);
    out += ",\"H_um\":" + format_double(c.cavity.h_um);
    out += ",\"p_um\":" + format_double(c.cavity.p_um);
    out += ",\"Nx\":" + std::to_string(c.cavity.nx);
    out += ",\"Ny\":" + std::to_string(c.cavity.ny);
    out += ",\"n_mode\":" + format_double(c.cavity.n_mode);
    out += ",\"Q_cav\":" + format_double(c.cavity.q_cav);
    out += "},\"emitter\":{";
    out += "\"E0_meV\":" + format_double(c.emitter.e0.mev);
    out += ",\"V0_V\":" + format_double(c.emitter.v0_v);
    out += ",\"kappa_meV_per_V\":" + format_double(c.emitter.kappa_mev_per_v);
    out += ",\"Q_EL\":" + format_double(c.q_el);
    out += ",\"tau_sp_ns\":" + format_double(c.emitter.tau_sp_ref.s * 1e9);
    out += "},\"cascade\":{";
    out += "\"Lp_nm\":" + format_double(c.cascade.lp_nm);
    out += ",\"tau3_ps\":" + format_double(c.cascade.tau3_ps);
    out += ",\"tau2_ps\":" + format_double(c.cascade.tau2_ps);
    out += ",\"tau32_ps\":" + format_double(c.cascade.tau32_ps);
    out += ",\"Gamma_tot_per_s\":" + format_double(c.cascade.gamma_tot_per_s);
    out += ",\"radiative_fraction\":" +
           format_double(c.cascade.gamma_r_per_s / c.cascade.gamma_tot_per_s);
    out += ",\"Jth_kA_cm2\":" + format_double(c.jth_target_a_cm2 * 1e-3);
    out += ",\"sigma_V_cm3_s\":" + format_double(c.cascade.sigma_v_cm3_s);
    out += "},\"farfield\":{";
    out += "\"z_mm\":" + format_double(c.farfield.z_mm);
    out += ",\"grid_mm\":" + format_double(c.farfield.grid_mm);
    out += ",\"step_mm\":" + format_double(c.farfield.step_mm);
    out += ",\"element_pattern\":\"" + to_string(c.farfield.element) + "\"";
    out += ",\"coherence_scale\":" + format_double(c.farfield.coherence_scale);
    out += "}}";
    return out;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return hex;
}

std::vector<std::pair<std::string, std::string>> assumption_notes() {
    return {
        {"cavity.n_mode", "modal index is a config input, not computed from dispersion"},
        {"emitter.kappa_meV_per_V", "linear Stark slope; magnitude not tabulated in source data"},
        {"emitter.tau_sp_ns", "free-space spontaneous lifetime; order-of-magnitude assumption"},
        {"cascade.tau3_ps", "transport lifetime assumption"},
        {"cascade.tau2_ps", "transport lifetime assumption"},
        {"cascade.tau32_ps", "transport lifetime assumption"},
        {"cascade.sigma_V_cm3_s", "calibrated so the bare threshold equals Jth_kA_cm2"},
    };
}

CavityMode config_cavity_mode(const DeviceConfig& config) {
    return cavity_mode(config.cavity);
}

PurcellModel config_purcell_model(const DeviceConfig& config) {
    return PurcellModel(config.emitter, config_cavity_mode(config), config.q_el);
}

ArrayGeometry config_array_geometry(const DeviceConfig& config) {
    ArrayGeometry geometry;
    geometry.nx = config.cavity.nx;
    geometry.ny = config.cavity.ny;
    geometry.pitch_um = config.cavity.p_um;
    geometry.lambda_um = config_cavity_mode(config).lambda_cav.um;
    geometry.element = config.farfield.element;
    geometry.coherence_scale = config.farfield.coherence_scale;
    return geometry;
}

}  // namespace patchlum
