#pragma once

#include "gomtrack/filters.hpp"
#include "gomtrack/grouping.hpp"
#include "gomtrack/metrics.hpp"
#include "gomtrack/motion.hpp"
#include "gomtrack/sensors.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gomtrack::harness {

enum class FilterKind { lmo_gom, lmb_gom, g_lmb_gom };

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& name);

struct TbdSpec {
  TbdModel model;
  /// When set, model.noise_var is derived from it through noise_var_for_snr.
  std::optional<double> snr_db;
};

struct AcousticSpec {
  int per_side = 15;
  double extent = 140.0;
  double amplitude = 10.0;
  double path_loss = 1.0;
  double noise_var = 1.0;
  /// Defaults to half the sensor spacing.
  std::optional<double> min_range;
};

struct MotionSpec {
  double dt = 1.0;
  double sigma_v = 0.1;
  double survival_prob = 0.98;
  /// Process noise of the simulated truth; defaults to sigma_v.
  std::optional<double> truth_sigma_v;
};

/// Object present at steps birth <= k < death (death 0 = until the end).
struct TrajectorySpec {
  std::uint32_t birth = 0;
  std::uint32_t death = 0;
  Kinematic initial = Kinematic::Zero();
};

struct InitTrack {
  Label label;
  double existence = 0.99;
  Kinematic mean = Kinematic::Zero();
  Matrix4 covariance = Matrix4::Identity();
};

/// Known initialization: one track per object alive at step 0, centred on its true state.
struct KnownInit {
  bool enabled = false;
  double existence = 0.99;
  Kinematic covariance_diag = Kinematic(2.0, 2.0, 0.5, 0.5);
};

struct ScenarioConfig {
  std::string name = "scenario";
  SensorKind sensor_kind = SensorKind::tbd;
  TbdSpec tbd;
  AcousticSpec acoustic;
  MotionSpec motion;
  std::vector<TrajectorySpec> trajectories;
  BirthModel birth;
  KnownInit known_init;
  std::vector<InitTrack> init_tracks;
  std::uint32_t steps = 30;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  FilterKind filter = FilterKind::lmb_gom;
  FilterConfig filter_config;
  GroupingConfig grouping;
  OspaParams ospa;
  /// First step included in post-transient summaries.
  std::uint32_t post_transient_start = 5;
  bool save_frames = false;
  /// Worker threads; 0 keeps the OpenMP default. Not part of the resolved echo.
  int threads = 0;

  Sensor sensor() const;
  MotionModel motion_model() const;
  MotionModel truth_motion() const;
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every default made explicit; parse_config of it reproduces the config.
nlohmann::json resolved_config(const ScenarioConfig& config);
void validate(const ScenarioConfig& config);

}  // namespace gomtrack::harness
