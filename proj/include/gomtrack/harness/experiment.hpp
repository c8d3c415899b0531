#pragma once

#include "gomtrack/harness/config.hpp"
#include "gomtrack/harness/scenario.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gomtrack::harness {

struct TrackRecord {
  Label label;
  double existence = 0.0;
  Position position = Position::Zero();
  bool estimated = false;
};

struct StepRecord {
  std::uint32_t step = 0;
  double ospa = 0.0;
  std::size_t estimated_cardinality = 0;
  std::size_t true_cardinality = 0;
  double frame_ms = 0.0;
  std::size_t groups = 0;
  std::vector<TrackRecord> tracks;
  std::vector<LabeledState> truth;
  std::string diagnostics;
};

struct RunResult {
  std::size_t run = 0;
  bool failed = false;
  std::string error;
  std::vector<StepRecord> steps;  // steps[i] is step i + 1
};

struct StepSummary {
  std::uint32_t step = 0;
  double mean_ospa = 0.0;
  double stderr_ospa = 0.0;
  double mean_cardinality = 0.0;
  std::size_t true_cardinality = 0;
  double mean_frame_ms = 0.0;
  double mean_groups = 0.0;
  /// Fraction of runs whose estimated cardinality equals the truth.
  double cardinality_hit_rate = 0.0;
};

struct ExperimentResult {
  ScenarioConfig config;
  std::vector<RunResult> runs;
  std::vector<StepSummary> steps;
  std::size_t failed_runs = 0;
  /// Means over steps >= post_transient_start and successful runs.
  double post_transient_ospa = 0.0;
  double post_transient_cardinality_hit_rate = 0.0;
};

class ExperimentFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One Monte Carlo run: truth, frames and filter driven from RandomStream(seed).child(run).
RunResult run_single(const ScenarioConfig& config, std::size_t run);

/// Runs config.runs runs in parallel and aggregates them in run order. Throws ExperimentFailed
/// if more than 10% of the runs fail.
ExperimentResult run_experiment(const ScenarioConfig& config);

ExperimentResult aggregate(const ScenarioConfig& config, std::vector<RunResult> runs);

}  // namespace gomtrack::harness
