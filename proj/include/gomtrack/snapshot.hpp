#pragma once

#include "gomtrack/types.hpp"

#include <json.hpp>

namespace gomtrack {

inline constexpr int kSnapshotVersion = 1;

nlohmann::json to_json(const Label& label);
Label label_from_json(const nlohmann::json& j);

/// {"version", "kind": "lmb", "tracks": [{"label", "existence", "weights", "states"}]}
nlohmann::json snapshot(const LmbDensity& lmb);
/// {"version", "kind": "lmo", "hypotheses": [{"labels", "weight", "weights", "states"}]}
nlohmann::json snapshot(const LmoDensity& lmo);

/// Throws std::invalid_argument on a version or kind mismatch.
LmbDensity lmb_from_snapshot(const nlohmann::json& j);
LmoDensity lmo_from_snapshot(const nlohmann::json& j);

}  // namespace gomtrack
