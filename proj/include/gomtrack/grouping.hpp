#pragma once

#include "gomtrack/sensors.hpp"
#include "gomtrack/types.hpp"

#include <vector>

namespace gomtrack {

enum class CouplingMode { tbd_distance, acoustic_radius, vor_intersection };

struct GroupingConfig {
  CouplingMode mode = CouplingMode::tbd_distance;
  double confidence = 0.99;  // lambda
  double tbd_threshold = 10.0;
  double acoustic_radius = 45.0;  // beta
};

void validate(const GroupingConfig& config);

struct TrackGroup {
  LabelSet labels;
  Region observations;
};

struct TrackPartition {
  std::vector<TrackGroup> groups;
  Region residual;
};

/// Axis-aligned position box holding the central `confidence` mass per axis.
struct PositionBox {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  bool contains(const Kinematic& x) const {
    return x[0] >= x_lo && x[0] <= x_hi && x[1] >= y_lo && x[1] <= y_hi;
  }
};

/// Weighted per-axis quantiles [(1 - confidence)/2, (1 + confidence)/2] of the positions.
PositionBox hdr_box(const ParticleCloud& cloud, double confidence);

/// Union of the state regions of every particle inside the H.D.R. box.
Region track_vor(const ParticleCloud& cloud, const Sensor& sensor, const GroupingConfig& config);

bool coupled(const ParticleCloud& a, const ParticleCloud& b, const Sensor& sensor,
             const GroupingConfig& config);

/// Connected components of the coupling graph over tracks with existence >= existence_floor,
/// merged further until their observation regions are disjoint. Groups are ordered by their
/// smallest label.
TrackPartition partition_tracks(const LmbDensity& lmb, const Sensor& sensor,
                                const GroupingConfig& config, double existence_floor);

}  // namespace gomtrack
