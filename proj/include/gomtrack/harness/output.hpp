#pragma once

#include "gomtrack/harness/experiment.hpp"

#include <filesystem>

namespace gomtrack::harness {

/// ospa.csv, cardinality.csv, timing.csv, groups.csv, tracks.jsonl, truth.jsonl, summary.json,
/// config.json (resolved echo) and diagnostics.log; frames of run 0 when save_frames is set.
/// Everything except timing.csv is a deterministic function of the config.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

/// Truth (truth.jsonl) and frames (frames/run_RRR/frame_KKK.{pgm,csv}) of the first `runs` runs.
void write_simulation(const ScenarioConfig& config, std::size_t runs, const std::filesystem::path& dir);

}  // namespace gomtrack::harness
