#pragma once

#include "gomtrack/smc.hpp"
#include "gomtrack/types.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace gomtrack {

struct PixelGrid {
  int width = 0;
  int height = 0;
  double cell_x = 1.0;
  double cell_y = 1.0;

  int cells() const { return width * height; }
  /// Row-major index of cell (a, b); the centre of cell (a, b) is (cell_x * a, cell_y * b).
  int index(int a, int b) const { return b * width + a; }
};

struct TbdModel {
  PixelGrid grid;
  double source_intensity = 1.0;
  double blur_var = 1.0;
  double noise_var = 1.0;
  int template_half = 3;

  /// Spread value at an on-centre cell, cell_x * cell_y * sigma_T / (2 pi sigma_b^2).
  double peak() const;
};

/// Noise variance giving SNR(dB) = 10 log10(peak^2 / sigma_N^2).
double noise_var_for_snr(const TbdModel& model, double snr_db);
double snr_db(const TbdModel& model);

struct AcousticModel {
  std::vector<Position> sensors;
  double amplitude = 10.0;
  double path_loss = 1.0;
  double noise_var = 1.0;
  double min_range = 1.0;
};

/// `per_side` x `per_side` sensors evenly covering [0, extent]^2; min_range is half the spacing.
AcousticModel acoustic_grid(int per_side, double extent, double amplitude, double path_loss,
                            double noise_var);

enum class SensorKind { tbd, acoustic };

struct ObservationFrame {
  SensorKind kind = SensorKind::tbd;
  std::vector<double> z;
};

/// Sorted, duplicate-free cell or sensor indices.
using Region = std::vector<int>;

Region region_union(const Region& a, const Region& b);
bool intersects(const Region& a, const Region& b);

// ---- TBD ----

/// Inclusive cell box of the effective template around the cell nearest to (px, py),
/// clipped to the grid. Empty when a_lo > a_hi or b_lo > b_hi.
struct TemplateBox {
  int a_lo = 0, a_hi = -1, b_lo = 0, b_hi = -1;
  bool empty() const { return a_lo > a_hi || b_lo > b_hi; }
};

TemplateBox template_box(const TbdModel& model, const Kinematic& x);

double point_spread(const TbdModel& model, const Kinematic& x, int cell);

/// log g(z | X). `mask`, when given, restricts the sum to cells with mask[j] != 0.
double tbd_log_likelihood(const TbdModel& model, const ObservationFrame& z,
                          std::span<const Kinematic> objects, const std::vector<char>* mask = nullptr);
double tbd_log_likelihood(const TbdModel& model, const ObservationFrame& z,
                          const std::vector<LabeledState>& objects);

/// log g(z | X) - log g(z | {}) over the template union only.
double tbd_log_likelihood_ratio(const TbdModel& model, const ObservationFrame& z,
                                std::span<const Kinematic> objects,
                                const std::vector<char>* mask = nullptr);

ObservationFrame sample_tbd_frame(const TbdModel& model, std::span<const Kinematic> objects, Rng& rng);

// ---- acoustic ----

double acoustic_mean(const AcousticModel& model, std::span<const Kinematic> objects, int sensor);
double acoustic_log_likelihood(const AcousticModel& model, const ObservationFrame& z,
                               std::span<const Kinematic> objects,
                               const std::vector<char>* mask = nullptr);
ObservationFrame sample_acoustic_frame(const AcousticModel& model, std::span<const Kinematic> objects,
                                       Rng& rng);

// ---- generic ----

using Sensor = std::variant<TbdModel, AcousticModel>;

SensorKind kind_of(const Sensor& sensor);
int observation_size(const Sensor& sensor);

/// Observation region of a single object: template cells for TBD, sensors within `beta`
/// metres for acoustic (beta is ignored for TBD).
Region state_vor(const Sensor& sensor, const Kinematic& x, double beta);

ObservationFrame sample_frame(const Sensor& sensor, std::span<const Kinematic> objects, Rng& rng);

/// Multi-object log-likelihood of a joint state for a fixed frame.
using LogLikelihood = std::function<double(std::span<const Kinematic>)>;

/// Binds a frame to a sensor. With a region the likelihood covers only those observation
/// indices; the returned callable owns copies of everything it needs.
LogLikelihood bind_likelihood(const Sensor& sensor, const ObservationFrame& frame);
LogLikelihood bind_likelihood(const Sensor& sensor, const ObservationFrame& frame,
                              const Region& region);

// ---- export ----

/// 16-bit binary PGM, values mapped by (z - offset) * scale onto [0, 65535]; the offset and
/// scale go to `<path>.txt`.
void write_pgm(const TbdModel& model, const ObservationFrame& frame, const std::filesystem::path& path);
/// TBD: one CSV row per image row. Acoustic: sensor_index,x,y,reading.
void write_frame_csv(const Sensor& sensor, const ObservationFrame& frame,
                     const std::filesystem::path& path);

}  // namespace gomtrack
