#pragma once

// Device configuration: one JSON document with cavity / emitter / cascade /
// farfield sections. Missing fields fall back to defaults and are echoed as
// assumed in every output; unknown keys are rejected by name. The resolved
// config has a canonical serialization whose FNV-1a hash is embedded in all
// data products.

#include <filesystem>
#include <string>
#include <vector>

#include "patchlum/cavity.hpp"
#include "patchlum/emitter.hpp"
#include "patchlum/farfield.hpp"
#include "patchlum/purcell.hpp"
#include "patchlum/ratemodel.hpp"

namespace patchlum {

struct FarfieldConfig {
    double z_mm{50.0};
    double grid_mm{6.0};   // half-extent of the detection-plane map
    double step_mm{0.05};
    ElementPattern element{ElementPattern::cosine};
    double coherence_scale{1.0};
};

struct DeviceConfig {
    PatchCavity cavity;
    StarkEmitter emitter;
    double q_el{9.0};  // emitter quality factor entering the Purcell Q
    CascadeParams cascade;       // sigma_V calibrated from the threshold target
    double jth_target_a_cm2{25e3};
    FarfieldConfig farfield;
    std::vector<std::string> assumed;  // "section.key" for every defaulted field
    std::string digest;                // hash of the canonical serialization
};

// Reads, validates and resolves a config document. Unknown keys produce a
// ValidationError listing the key; violated invariants name the field.
DeviceConfig parse_config(const std::filesystem::path& path);

// Parses from a JSON string (same semantics); source labels error messages.
DeviceConfig parse_config_text(const std::string& text, const std::string& source);

// All defaults, every field flagged as assumed.
DeviceConfig default_config();

// Fixed-key-order serialization of the resolved config; basis of the digest.
std::string canonical_json(const DeviceConfig& config);

std::string fnv1a_hex(std::string_view bytes);

// Provenance notes for values that are modelling assumptions rather than
// quoted device data.
std::vector<std::pair<std::string, std::string>> assumption_notes();

// Composition helpers.
CavityMode config_cavity_mode(const DeviceConfig& config);
PurcellModel config_purcell_model(const DeviceConfig& config);
ArrayGeometry config_array_geometry(const DeviceConfig& config);

}  // namespace patchlum
