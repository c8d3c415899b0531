#pragma once

#include "gomtrack/grouping.hpp"
#include "gomtrack/kernels.hpp"
#include "gomtrack/motion.hpp"
#include "gomtrack/rfs.hpp"
#include "gomtrack/sensors.hpp"
#include "gomtrack/smc.hpp"
#include "gomtrack/types.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gomtrack {

struct FilterConfig {
  std::size_t particles = 1000;
  double hypothesis_weight_floor = 1e-4;
  std::size_t max_hypotheses = 100;
  /// Floor and cap on predicted hypothesis tables, applied before any particle is drawn.
  double predicted_weight_floor = 1e-6;
  std::size_t max_predicted_hypotheses = 256;
  double existence_floor = 1e-3;
  double extraction_threshold = 0.5;
  double track_prune_threshold = 1e-3;
  /// Resample when ESS < fraction * N; 1.0 resamples after every update.
  double resample_ess_fraction = 1.0;
  /// Replace sampling by enumeration of finite transition and birth supports.
  bool exhaustive = false;
  Execution execution = Execution::parallel;
};

void validate(const FilterConfig& config);

/// Every hypothesis of an update had zero likelihood mass.
class DegenerateUpdate : public std::runtime_error {
 public:
  DegenerateUpdate(std::uint32_t time, const std::string& what)
      : std::runtime_error(what + " at step " + std::to_string(time)), time_(time) {}
  std::uint32_t time() const { return time_; }

 private:
  std::uint32_t time_;
};

struct PredictedWeightTable {
  std::map<LabelSet, double> weights;
};

// ---- LMO-GOM ----

/// eta_{S,I}(J) for every J subset of I, from the particles of one prior hypothesis.
std::map<LabelSet, double> survival_eta(const Hypothesis& hypothesis, const Dynamics& dynamics);

/// omega_+ over surviving and newly born labels, truncated by floor and cap, renormalized.
PredictedWeightTable lmo_predicted_weights(const LmoDensity& prior, const BirthModel& birth,
                                           const Dynamics& dynamics, std::uint32_t time,
                                           const FilterConfig& config);

/// One prediction + update of the exact filter. `time` labels the births of this step.
LmoDensity lmo_gom_step(const LmoDensity& prior, const BirthModel& birth, const Dynamics& dynamics,
                        const LogLikelihood& likelihood, std::uint32_t time,
                        const FilterConfig& config, const RandomStream& stream);

// ---- LMB-GOM ----

LmbDensity lmb_predict(const LmbDensity& prior, const BirthModel& birth, const Dynamics& dynamics,
                       std::uint32_t time, const FilterConfig& config, const RandomStream& stream);

/// Update over tracks with existence >= existence_floor; other tracks pass through.
LmbDensity lmb_gom_update(const LmbDensity& predicted, const LogLikelihood& likelihood,
                          std::uint32_t time, const FilterConfig& config,
                          const RandomStream& stream);

/// lmb_predict with stream.child(0), then lmb_gom_update with stream.child(1).
LmbDensity lmb_gom_step(const LmbDensity& prior, const BirthModel& birth, const Dynamics& dynamics,
                        const LogLikelihood& likelihood, std::uint32_t time,
                        const FilterConfig& config, const RandomStream& stream);

// ---- G-LMB-GOM ----

struct GroupReport {
  std::size_t groups = 0;
  std::size_t degenerate_groups = 0;
  TrackPartition partition;
};

/// Predicts, partitions the gated tracks and updates every group against its own observation
/// region. With one group or fewer this is exactly lmb_gom_step.
LmbDensity g_lmb_gom_step(const LmbDensity& prior, const BirthModel& birth,
                          const Dynamics& dynamics, const Sensor& sensor,
                          const ObservationFrame& frame, const GroupingConfig& grouping,
                          std::uint32_t time, const FilterConfig& config,
                          const RandomStream& stream, GroupReport* report = nullptr);

}  // namespace gomtrack
