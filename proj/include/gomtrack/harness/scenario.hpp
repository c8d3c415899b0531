#pragma once

#include "gomtrack/harness/config.hpp"
#include "gomtrack/smc.hpp"
#include "gomtrack/types.hpp"

#include <vector>

namespace gomtrack::harness {

/// truth[k] lists the objects present at step k = 0..steps. Object i carries
/// Label{birth, i + 1}.
using Truth = std::vector<std::vector<LabeledState>>;

Truth generate_truth(const ScenarioConfig& config, const RandomStream& stream);

/// frames[k] for k = 1..steps; frames[0] is empty.
std::vector<ObservationFrame> generate_frames(const ScenarioConfig& config, const Sensor& sensor,
                                              const Truth& truth, const RandomStream& stream);

/// Explicit init_tracks plus, in known-init mode, one track per object alive at step 0
/// labelled Label{0, i + 1} and centred on its true state.
LmbDensity initial_tracks(const ScenarioConfig& config, const Truth& truth,
                          const RandomStream& stream);

}  // namespace gomtrack::harness
