#pragma once

#include <string>

#include <json.hpp>

#include "bell/lhv.hpp"
#include "bell/operators.hpp"
#include "bell/tensor.hpp"

namespace bell {

/// File formats
///
/// Separable state:
///   {"n": int, "terms": [{"p": w, "bloch": [f, ...]}, ...]}
///   where each factor f is either [x, y, z] (pure state along that Bloch
///   direction) or {"matrix": [[re, im] x 4]} (row-major 2x2, mixed factors).
///
/// Settings:
///   {"n": int, "angles": [phi, ...]}                       planar, radians
///   {"n": int, "pairs": [[[x,y,z], [x,y,z]], ...]}         general orthogonal
///
/// LHV model:
///   {"lambdas": m, "probs": [...], "responses": [[[r00, r01], ...], ...]}
///   with responses[lambda][party][setting].

nlohmann::ordered_json separable_to_json(const SeparableState& s);
SeparableState separable_from_json(const nlohmann::json& j);

nlohmann::ordered_json settings_to_json(const MeasurementSettings& s);
MeasurementSettings settings_from_json(const nlohmann::json& j);

nlohmann::ordered_json lhv_model_to_json(const LHVModel& m);
LHVModel lhv_model_from_json(const nlohmann::json& j);

/// Parses a JSON file; wraps syntax problems in parse_error with the
/// reported byte position and file name.
nlohmann::json load_json_file(const std::string& path);

void save_json_file(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace bell
