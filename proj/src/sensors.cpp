#include "gomtrack/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace gomtrack {

namespace {

void check_frame(const ObservationFrame& z, SensorKind kind, std::size_t size) {
  if (z.kind != kind || z.z.size() != size) {
    throw std::invalid_argument("observation frame does not match the sensor model");
  }
}

double gaussian_log_norm(double var) { return -0.5 * std::log(2.0 * std::numbers::pi * var); }

double baseline(const ObservationFrame& z, double noise_var, const std::vector<char>* mask) {
  const double log_norm = gaussian_log_norm(noise_var);
  const double inv = 0.5 / noise_var;
  double acc = 0.0;
  for (std::size_t j = 0; j < z.z.size(); ++j) {
    if (mask && !(*mask)[j]) continue;
    acc += log_norm - z.z[j] * z.z[j] * inv;
  }
  return acc;
}

/// Range-clamped amplitude of one object at sensor position `s`.
double amplitude_at(const AcousticModel& model, const Kinematic& x, const Position& s) {
  const double d = std::max(std::hypot(x[0] - s[0], x[1] - s[1]), model.min_range);
  return model.path_loss == 1.0 ? model.amplitude / d
                                : model.amplitude / std::pow(d, model.path_loss);
}

double acoustic_ll_indexed(const AcousticModel& model, const ObservationFrame& z,
                           std::span<const Kinematic> objects, std::span<const int> indices) {
  const double log_norm = gaussian_log_norm(model.noise_var);
  const double inv = 0.5 / model.noise_var;
  double acc = 0.0;
  for (int m : indices) {
    double h = 0.0;
    for (const auto& x : objects) h += amplitude_at(model, x, model.sensors[m]);
    const double r = z.z[m] - h;
    acc += log_norm - r * r * inv;
  }
  return acc;
}

void validate(const TbdModel& m) {
  if (m.grid.width <= 0 || m.grid.height <= 0 || m.grid.cell_x <= 0.0 || m.grid.cell_y <= 0.0 ||
      m.source_intensity <= 0.0 || m.blur_var <= 0.0 || m.noise_var <= 0.0 || m.template_half < 0) {
    throw std::invalid_argument("invalid TBD model parameters");
  }
}

void validate(const AcousticModel& m) {
  if (m.sensors.empty() || m.amplitude <= 0.0 || m.path_loss <= 0.0 || m.noise_var <= 0.0 ||
      m.min_range <= 0.0) {
    throw std::invalid_argument("invalid acoustic model parameters");
  }
}

}  // namespace

double TbdModel::peak() const {
  return grid.cell_x * grid.cell_y * source_intensity / (2.0 * std::numbers::pi * blur_var);
}

double noise_var_for_snr(const TbdModel& model, double snr_db) {
  const double p = model.peak();
  return p * p / std::pow(10.0, snr_db / 10.0);
}

double snr_db(const TbdModel& model) {
  const double p = model.peak();
  return 10.0 * std::log10(p * p / model.noise_var);
}

AcousticModel acoustic_grid(int per_side, double extent, double amplitude, double path_loss,
                            double noise_var) {
  if (per_side < 2) throw std::invalid_argument("acoustic grid needs at least 2 sensors per side");
  AcousticModel model;
  const double spacing = extent / (per_side - 1);
  for (int b = 0; b < per_side; ++b) {
    for (int a = 0; a < per_side; ++a) model.sensors.emplace_back(a * spacing, b * spacing);
  }
  model.amplitude = amplitude;
  model.path_loss = path_loss;
  model.noise_var = noise_var;
  model.min_range = 0.5 * spacing;
  return model;
}

Region region_union(const Region& a, const Region& b) {
  Region out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool intersects(const Region& a, const Region& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

// ---- TBD ----

TemplateBox template_box(const TbdModel& model, const Kinematic& x) {
  const auto& g = model.grid;
  const double ca = std::round(x[0] / g.cell_x);
  const double cb = std::round(x[1] / g.cell_y);
  // far-away objects: keep the arithmetic in range, the clipped box is then empty
  const double limit = 1e6;
  const int a0 = static_cast<int>(std::clamp(ca, -limit, limit));
  const int b0 = static_cast<int>(std::clamp(cb, -limit, limit));
  TemplateBox box;
  box.a_lo = std::max(a0 - model.template_half, 0);
  box.a_hi = std::min(a0 + model.template_half, g.width - 1);
  box.b_lo = std::max(b0 - model.template_half, 0);
  box.b_hi = std::min(b0 + model.template_half, g.height - 1);
  return box;
}

double point_spread(const TbdModel& model, const Kinematic& x, int cell) {
  const auto& g = model.grid;
  const int a = cell % g.width;
  const int b = cell / g.width;
  const auto box = template_box(model, x);
  if (a < box.a_lo || a > box.a_hi || b < box.b_lo || b > box.b_hi) return 0.0;
  const double dx = g.cell_x * a - x[0];
  const double dy = g.cell_y * b - x[1];
  return model.peak() * std::exp(-(dx * dx + dy * dy) / (2.0 * model.blur_var));
}

double tbd_log_likelihood_ratio(const TbdModel& model, const ObservationFrame& z,
                                std::span<const Kinematic> objects, const std::vector<char>* mask) {
  const auto& g = model.grid;
  check_frame(z, SensorKind::tbd, static_cast<std::size_t>(g.cells()));
  const std::size_t n = objects.size();
  if (n == 0) return 0.0;

  // c_j(x) = K ex(a) ey(b): per object only the template row and column factors are needed
  const int span = 2 * model.template_half + 1;
  thread_local std::vector<double> fx;
  thread_local std::vector<double> fy;
  thread_local std::vector<TemplateBox> boxes;
  fx.resize(n * span);
  fy.resize(n * span);
  boxes.resize(n);
  const double inv_blur = 1.0 / (2.0 * model.blur_var);
  for (std::size_t i = 0; i < n; ++i) {
    const auto box = template_box(model, objects[i]);
    boxes[i] = box;
    if (box.empty()) continue;
    for (int a = box.a_lo; a <= box.a_hi; ++a) {
      const double d = g.cell_x * a - objects[i][0];
      fx[i * span + (a - box.a_lo)] = std::exp(-d * d * inv_blur);
    }
    for (int b = box.b_lo; b <= box.b_hi; ++b) {
      const double d = g.cell_y * b - objects[i][1];
      fy[i * span + (b - box.b_lo)] = std::exp(-d * d * inv_blur);
    }
  }

  const double k = model.peak();
  const double* zj = z.z.data();
  double acc = 0.0;
  // sum_j (2 z_j mu_j - mu_j^2) with mu_j = sum_i c_ij, split into own terms and pair terms
  for (std::size_t i = 0; i < n; ++i) {
    const auto& box = boxes[i];
    if (box.empty()) continue;
    for (int b = box.b_lo; b <= box.b_hi; ++b) {
      const double cy = k * fy[i * span + (b - box.b_lo)];
      for (int a = box.a_lo; a <= box.a_hi; ++a) {
        const int j = g.index(a, b);
        if (mask && !(*mask)[j]) continue;
        const double c = cy * fx[i * span + (a - box.a_lo)];
        acc += (2.0 * zj[j] - c) * c;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& bi = boxes[i];
    if (bi.empty()) continue;
    for (std::size_t m = i + 1; m < n; ++m) {
      const auto& bm = boxes[m];
      const int a_lo = std::max(bi.a_lo, bm.a_lo);
      const int a_hi = std::min(bi.a_hi, bm.a_hi);
      const int b_lo = std::max(bi.b_lo, bm.b_lo);
      const int b_hi = std::min(bi.b_hi, bm.b_hi);
      if (bm.empty() || a_lo > a_hi || b_lo > b_hi) continue;
      for (int b = b_lo; b <= b_hi; ++b) {
        const double cy = k * k * fy[i * span + (b - bi.b_lo)] * fy[m * span + (b - bm.b_lo)];
        for (int a = a_lo; a <= a_hi; ++a) {
          if (mask && !(*mask)[g.index(a, b)]) continue;
          acc -= 2.0 * cy * fx[i * span + (a - bi.a_lo)] * fx[m * span + (a - bm.a_lo)];
        }
      }
    }
  }
  return acc / (2.0 * model.noise_var);
}

double tbd_log_likelihood(const TbdModel& model, const ObservationFrame& z,
                          std::span<const Kinematic> objects, const std::vector<char>* mask) {
  const double ratio = tbd_log_likelihood_ratio(model, z, objects, mask);
  return baseline(z, model.noise_var, mask) + ratio;
}

double tbd_log_likelihood(const TbdModel& model, const ObservationFrame& z,
                          const std::vector<LabeledState>& objects) {
  std::vector<Kinematic> xs;
  xs.reserve(objects.size());
  for (const auto& o : objects) xs.push_back(o.kinematic);
  return tbd_log_likelihood(model, z, xs);
}

ObservationFrame sample_tbd_frame(const TbdModel& model, std::span<const Kinematic> objects, Rng& rng) {
  validate(model);
  const auto& g = model.grid;
  ObservationFrame frame{SensorKind::tbd, std::vector<double>(g.cells(), 0.0)};
  for (const auto& x : objects) {
    const auto box = template_box(model, x);
    for (int b = box.b_lo; b <= box.b_hi; ++b) {
      for (int a = box.a_lo; a <= box.a_hi; ++a) {
        frame.z[g.index(a, b)] += point_spread(model, x, g.index(a, b));
      }
    }
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(model.noise_var);
  for (auto& v : frame.z) v += sd * normal(rng);
  return frame;
}

// ---- acoustic ----

double acoustic_mean(const AcousticModel& model, std::span<const Kinematic> objects, int sensor) {
  double h = 0.0;
  for (const auto& x : objects) h += amplitude_at(model, x, model.sensors.at(sensor));
  return h;
}

double acoustic_log_likelihood(const AcousticModel& model, const ObservationFrame& z,
                               std::span<const Kinematic> objects, const std::vector<char>* mask) {
  check_frame(z, SensorKind::acoustic, model.sensors.size());
  std::vector<int> indices;
  indices.reserve(model.sensors.size());
  for (std::size_t m = 0; m < model.sensors.size(); ++m) {
    if (!mask || (*mask)[m]) indices.push_back(static_cast<int>(m));
  }
  return acoustic_ll_indexed(model, z, objects, indices);
}

ObservationFrame sample_acoustic_frame(const AcousticModel& model, std::span<const Kinematic> objects,
                                       Rng& rng) {
  validate(model);
  ObservationFrame frame{SensorKind::acoustic, std::vector<double>(model.sensors.size(), 0.0)};
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(model.noise_var);
  for (std::size_t m = 0; m < model.sensors.size(); ++m) {
    frame.z[m] = acoustic_mean(model, objects, static_cast<int>(m)) + sd * normal(rng);
  }
  return frame;
}

// ---- generic ----

SensorKind kind_of(const Sensor& sensor) {
  return std::holds_alternative<TbdModel>(sensor) ? SensorKind::tbd : SensorKind::acoustic;
}

int observation_size(const Sensor& sensor) {
  if (const auto* t = std::get_if<TbdModel>(&sensor)) return t->grid.cells();
  return static_cast<int>(std::get<AcousticModel>(sensor).sensors.size());
}

Region state_vor(const Sensor& sensor, const Kinematic& x, double beta) {
  Region out;
  if (const auto* t = std::get_if<TbdModel>(&sensor)) {
    const auto box = template_box(*t, x);
    for (int b = box.b_lo; b <= box.b_hi; ++b) {
      for (int a = box.a_lo; a <= box.a_hi; ++a) out.push_back(t->grid.index(a, b));
    }
    return out;
  }
  const auto& a = std::get<AcousticModel>(sensor);
  for (std::size_t m = 0; m < a.sensors.size(); ++m) {
    if (std::hypot(x[0] - a.sensors[m][0], x[1] - a.sensors[m][1]) <= beta) {
      out.push_back(static_cast<int>(m));
    }
  }
  return out;
}

ObservationFrame sample_frame(const Sensor& sensor, std::span<const Kinematic> objects, Rng& rng) {
  if (const auto* t = std::get_if<TbdModel>(&sensor)) return sample_tbd_frame(*t, objects, rng);
  return sample_acoustic_frame(std::get<AcousticModel>(sensor), objects, rng);
}

LogLikelihood bind_likelihood(const Sensor& sensor, const ObservationFrame& frame) {
  if (const auto* t = std::get_if<TbdModel>(&sensor)) {
    validate(*t);
    check_frame(frame, SensorKind::tbd, static_cast<std::size_t>(t->grid.cells()));
    const double base = baseline(frame, t->noise_var, nullptr);
    return [model = *t, frame, base](std::span<const Kinematic> xs) {
      return base + tbd_log_likelihood_ratio(model, frame, xs);
    };
  }
  const auto& a = std::get<AcousticModel>(sensor);
  validate(a);
  check_frame(frame, SensorKind::acoustic, a.sensors.size());
  std::vector<int> all(a.sensors.size());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = static_cast<int>(m);
  return [model = a, frame, all = std::move(all)](std::span<const Kinematic> xs) {
    return acoustic_ll_indexed(model, frame, xs, all);
  };
}

LogLikelihood bind_likelihood(const Sensor& sensor, const ObservationFrame& frame,
                              const Region& region) {
  const auto size = static_cast<std::size_t>(observation_size(sensor));
  for (int j : region) {
    if (j < 0 || static_cast<std::size_t>(j) >= size) throw std::out_of_range("region index");
  }
  if (const auto* t = std::get_if<TbdModel>(&sensor)) {
    validate(*t);
    check_frame(frame, SensorKind::tbd, size);
    std::vector<char> mask(size, 0);
    for (int j : region) mask[j] = 1;
    const double base = baseline(frame, t->noise_var, &mask);
    return [model = *t, frame, mask = std::move(mask), base](std::span<const Kinematic> xs) {
      return base + tbd_log_likelihood_ratio(model, frame, xs, &mask);
    };
  }
  const auto& a = std::get<AcousticModel>(sensor);
  validate(a);
  check_frame(frame, SensorKind::acoustic, size);
  return [model = a, frame, region](std::span<const Kinematic> xs) {
    return acoustic_ll_indexed(model, frame, xs, region);
  };
}

// ---- export ----

void write_pgm(const TbdModel& model, const ObservationFrame& frame, const std::filesystem::path& path) {
  check_frame(frame, SensorKind::tbd, static_cast<std::size_t>(model.grid.cells()));
  const auto [lo, hi] = std::minmax_element(frame.z.begin(), frame.z.end());
  const double offset = *lo;
  const double scale = *hi > *lo ? 65535.0 / (*hi - *lo) : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << model.grid.width << ' ' << model.grid.height << "\n65535\n";
  for (double v : frame.z) {
    const auto q = static_cast<unsigned>(std::clamp(std::lround((v - offset) * scale), 0L, 65535L));
    out.put(static_cast<char>(q >> 8));
    out.put(static_cast<char>(q & 0xff));
  }
  std::ofstream side(path.string() + ".txt");
  side << std::setprecision(17) << "offset " << offset << "\nscale " << scale << '\n';
}

void write_frame_csv(const Sensor& sensor, const ObservationFrame& frame,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  if (const auto* t = std::get_if<TbdModel>(&sensor)) {
    check_frame(frame, SensorKind::tbd, static_cast<std::size_t>(t->grid.cells()));
    for (int b = 0; b < t->grid.height; ++b) {
      for (int a = 0; a < t->grid.width; ++a) {
        out << (a ? "," : "") << frame.z[t->grid.index(a, b)];
      }
      out << '\n';
    }
    return;
  }
  const auto& a = std::get<AcousticModel>(sensor);
  check_frame(frame, SensorKind::acoustic, a.sensors.size());
  out << "sensor_index,x,y,reading\n";
  for (std::size_t m = 0; m < a.sensors.size(); ++m) {
    out << m << ',' << a.sensors[m][0] << ',' << a.sensors[m][1] << ',' << frame.z[m] << '\n';
  }
}

}  // namespace gomtrack
