#include "gomtrack/harness/config.hpp"

#include "gomtrack/snapshot.hpp"

#include <fstream>
#include <stdexcept>

namespace gomtrack::harness {

namespace {

using nlohmann::json;

Kinematic vec4(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("expected a 4-vector");
  return Kinematic(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

json to_json(const Kinematic& x) { return json::array({x[0], x[1], x[2], x[3]}); }

Matrix4 covariance_from(const json& obj) {
  if (obj.contains("covariance")) {
    const auto& rows = obj.at("covariance");
    if (!rows.is_array() || rows.size() != 4) throw std::invalid_argument("covariance must be 4x4");
    Matrix4 m;
    for (int r = 0; r < 4; ++r) m.row(r) = vec4(rows[r]).transpose();
    return m;
  }
  if (obj.contains("covariance_diag")) return vec4(obj.at("covariance_diag")).asDiagonal();
  return Matrix4::Zero();
}

json covariance_json(const Matrix4& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) rows.push_back(to_json(m.row(r).transpose()));
  return rows;
}

std::string mode_name(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::tbd_distance: return "tbd-distance";
    case CouplingMode::acoustic_radius: return "acoustic-radius";
    case CouplingMode::vor_intersection: return "vor-intersection";
  }
  return "tbd-distance";
}

CouplingMode mode_from(const std::string& s) {
  if (s == "tbd-distance") return CouplingMode::tbd_distance;
  if (s == "acoustic-radius") return CouplingMode::acoustic_radius;
  if (s == "vor-intersection") return CouplingMode::vor_intersection;
  throw std::invalid_argument("unknown grouping mode '" + s + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::lmo_gom: return "lmo-gom";
    case FilterKind::lmb_gom: return "lmb-gom";
    case FilterKind::g_lmb_gom: return "g-lmb-gom";
  }
  return "lmb-gom";
}

FilterKind filter_kind_from_string(const std::string& name) {
  if (name == "lmo-gom") return FilterKind::lmo_gom;
  if (name == "lmb-gom") return FilterKind::lmb_gom;
  if (name == "g-lmb-gom") return FilterKind::g_lmb_gom;
  throw std::invalid_argument("unknown filter '" + name + "' (lmo-gom | lmb-gom | g-lmb-gom)");
}

Sensor ScenarioConfig::sensor() const {
  if (sensor_kind == SensorKind::tbd) {
    TbdModel m = tbd.model;
    if (tbd.snr_db) m.noise_var = noise_var_for_snr(m, *tbd.snr_db);
    return m;
  }
  auto m = acoustic_grid(acoustic.per_side, acoustic.extent, acoustic.amplitude, acoustic.path_loss,
                         acoustic.noise_var);
  if (acoustic.min_range) m.min_range = *acoustic.min_range;
  return m;
}

MotionModel ScenarioConfig::motion_model() const {
  return MotionModel::constant_velocity(motion.dt, motion.sigma_v, motion.survival_prob);
}

MotionModel ScenarioConfig::truth_motion() const {
  return MotionModel::constant_velocity(motion.dt, motion.truth_sigma_v.value_or(motion.sigma_v),
                                        motion.survival_prob);
}

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  read(j, "name", c.name);

  const auto& s = j.at("sensor");
  const auto kind = s.at("kind").get<std::string>();
  if (kind == "tbd") {
    c.sensor_kind = SensorKind::tbd;
    auto& m = c.tbd.model;
    read(s, "width", m.grid.width);
    read(s, "height", m.grid.height);
    read(s, "cell_x", m.grid.cell_x);
    read(s, "cell_y", m.grid.cell_y);
    read(s, "source_intensity", m.source_intensity);
    read(s, "blur_var", m.blur_var);
    read(s, "noise_var", m.noise_var);
    read(s, "template_half", m.template_half);
    if (s.contains("snr_db") && !s.at("snr_db").is_null()) c.tbd.snr_db = s.at("snr_db").get<double>();
  } else if (kind == "acoustic") {
    c.sensor_kind = SensorKind::acoustic;
    auto& a = c.acoustic;
    read(s, "per_side", a.per_side);
    read(s, "extent", a.extent);
    read(s, "amplitude", a.amplitude);
    read(s, "path_loss", a.path_loss);
    read(s, "noise_var", a.noise_var);
    if (s.contains("min_range") && !s.at("min_range").is_null()) a.min_range = s.at("min_range").get<double>();
  } else {
    throw std::invalid_argument("unknown sensor kind '" + kind + "'");
  }

  if (j.contains("motion")) {
    const auto& m = j.at("motion");
    read(m, "dt", c.motion.dt);
    read(m, "sigma_v", c.motion.sigma_v);
    read(m, "survival_prob", c.motion.survival_prob);
    if (m.contains("truth_sigma_v") && !m.at("truth_sigma_v").is_null()) {
      c.motion.truth_sigma_v = m.at("truth_sigma_v").get<double>();
    }
  }

  for (const auto& t : j.value("trajectories", json::array())) {
    TrajectorySpec spec;
    read(t, "birth", spec.birth);
    read(t, "death", spec.death);
    spec.initial = vec4(t.at("initial"));
    c.trajectories.push_back(spec);
  }

  for (const auto& b : j.value("birth", json::array())) {
    BirthComponent comp;
    comp.existence = b.at("existence").get<double>();
    if (b.contains("mean")) comp.mean = vec4(b.at("mean"));
    comp.covariance = covariance_from(b);
    for (const auto& s2 : b.value("support", json::array())) {
      comp.support.push_back({s2.at("probability").get<double>(), vec4(s2.at("state"))});
    }
    c.birth.components.push_back(std::move(comp));
  }

  if (j.contains("known_init")) {
    const auto& k = j.at("known_init");
    read(k, "enabled", c.known_init.enabled);
    read(k, "existence", c.known_init.existence);
    if (k.contains("covariance_diag")) c.known_init.covariance_diag = vec4(k.at("covariance_diag"));
  }
  for (const auto& t : j.value("init_tracks", json::array())) {
    InitTrack track;
    track.label = label_from_json(t.at("label"));
    read(t, "existence", track.existence);
    track.mean = vec4(t.at("mean"));
    track.covariance = covariance_from(t);
    c.init_tracks.push_back(track);
  }

  read(j, "steps", c.steps);
  read(j, "runs", c.runs);
  read(j, "seed", c.seed);
  if (j.contains("filter")) c.filter = filter_kind_from_string(j.at("filter").get<std::string>());

  if (j.contains("filter_config")) {
    const auto& f = j.at("filter_config");
    auto& fc = c.filter_config;
    read(f, "particles", fc.particles);
    read(f, "hypothesis_weight_floor", fc.hypothesis_weight_floor);
    read(f, "max_hypotheses", fc.max_hypotheses);
    read(f, "predicted_weight_floor", fc.predicted_weight_floor);
    read(f, "max_predicted_hypotheses", fc.max_predicted_hypotheses);
    read(f, "existence_floor", fc.existence_floor);
    read(f, "extraction_threshold", fc.extraction_threshold);
    read(f, "track_prune_threshold", fc.track_prune_threshold);
    read(f, "resample_ess_fraction", fc.resample_ess_fraction);
    read(f, "exhaustive", fc.exhaustive);
    if (f.contains("execution")) {
      const auto e = f.at("execution").get<std::string>();
      if (e != "serial" && e != "parallel") throw std::invalid_argument("execution must be serial|parallel");
      fc.execution = e == "serial" ? Execution::serial : Execution::parallel;
    }
  }
  if (j.contains("grouping")) {
    const auto& g = j.at("grouping");
    if (g.contains("mode")) c.grouping.mode = mode_from(g.at("mode").get<std::string>());
    read(g, "confidence", c.grouping.confidence);
    read(g, "tbd_threshold", c.grouping.tbd_threshold);
    read(g, "acoustic_radius", c.grouping.acoustic_radius);
  }
  if (j.contains("ospa")) {
    read(j.at("ospa"), "cutoff", c.ospa.cutoff);
    read(j.at("ospa"), "order", c.ospa.order);
  }
  read(j, "post_transient_start", c.post_transient_start);
  read(j, "save_frames", c.save_frames);
  read(j, "threads", c.threads);
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("cannot parse config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json resolved_config(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  if (c.sensor_kind == SensorKind::tbd) {
    const auto& m = c.tbd.model;
    j["sensor"] = {{"kind", "tbd"},
                   {"width", m.grid.width},
                   {"height", m.grid.height},
                   {"cell_x", m.grid.cell_x},
                   {"cell_y", m.grid.cell_y},
                   {"source_intensity", m.source_intensity},
                   {"blur_var", m.blur_var},
                   {"noise_var", m.noise_var},
                   {"template_half", m.template_half},
                   {"snr_db", c.tbd.snr_db ? json(*c.tbd.snr_db) : json(nullptr)}};
  } else {
    const auto& a = c.acoustic;
    j["sensor"] = {{"kind", "acoustic"},
                   {"per_side", a.per_side},
                   {"extent", a.extent},
                   {"amplitude", a.amplitude},
                   {"path_loss", a.path_loss},
                   {"noise_var", a.noise_var},
                   {"min_range", a.min_range ? json(*a.min_range) : json(nullptr)}};
  }
  j["motion"] = {{"dt", c.motion.dt},
                 {"sigma_v", c.motion.sigma_v},
                 {"survival_prob", c.motion.survival_prob},
                 {"truth_sigma_v", c.motion.truth_sigma_v ? json(*c.motion.truth_sigma_v) : json(nullptr)}};
  j["trajectories"] = json::array();
  for (const auto& t : c.trajectories) {
    j["trajectories"].push_back({{"birth", t.birth}, {"death", t.death}, {"initial", to_json(t.initial)}});
  }
  j["birth"] = json::array();
  for (const auto& b : c.birth.components) {
    json comp = {{"existence", b.existence}, {"mean", to_json(b.mean)}, {"covariance", covariance_json(b.covariance)}};
    if (!b.support.empty()) {
      comp["support"] = json::array();
      for (const auto& s : b.support) comp["support"].push_back({{"probability", s.probability}, {"state", to_json(s.state)}});
    }
    j["birth"].push_back(std::move(comp));
  }
  j["known_init"] = {{"enabled", c.known_init.enabled},
                     {"existence", c.known_init.existence},
                     {"covariance_diag", to_json(c.known_init.covariance_diag)}};
  j["init_tracks"] = json::array();
  for (const auto& t : c.init_tracks) {
    j["init_tracks"].push_back({{"label", gomtrack::to_json(t.label)},
                                {"existence", t.existence},
                                {"mean", to_json(t.mean)},
                                {"covariance", covariance_json(t.covariance)}});
  }
  j["steps"] = c.steps;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["filter"] = to_string(c.filter);
  const auto& fc = c.filter_config;
  j["filter_config"] = {{"particles", fc.particles},
                        {"hypothesis_weight_floor", fc.hypothesis_weight_floor},
                        {"max_hypotheses", fc.max_hypotheses},
                        {"predicted_weight_floor", fc.predicted_weight_floor},
                        {"max_predicted_hypotheses", fc.max_predicted_hypotheses},
                        {"existence_floor", fc.existence_floor},
                        {"extraction_threshold", fc.extraction_threshold},
                        {"track_prune_threshold", fc.track_prune_threshold},
                        {"resample_ess_fraction", fc.resample_ess_fraction},
                        {"exhaustive", fc.exhaustive},
                        {"execution", fc.execution == Execution::serial ? "serial" : "parallel"}};
  j["grouping"] = {{"mode", mode_name(c.grouping.mode)},
                   {"confidence", c.grouping.confidence},
                   {"tbd_threshold", c.grouping.tbd_threshold},
                   {"acoustic_radius", c.grouping.acoustic_radius}};
  j["ospa"] = {{"cutoff", c.ospa.cutoff}, {"order", c.ospa.order}};
  j["post_transient_start"] = c.post_transient_start;
  j["save_frames"] = c.save_frames;
  return j;
}

void validate(const ScenarioConfig& c) {
  validate(c.filter_config);
  validate(c.grouping);
  if (c.steps == 0) throw std::invalid_argument("steps must be positive");
  if (c.runs == 0) throw std::invalid_argument("runs must be positive");
  if (c.motion.dt <= 0.0 || c.motion.sigma_v < 0.0 || c.motion.survival_prob < 0.0 ||
      c.motion.survival_prob > 1.0) {
    throw std::invalid_argument("invalid motion parameters");
  }
  for (std::size_t i = 0; i < c.trajectories.size(); ++i) {
    const auto& t = c.trajectories[i];
    if (t.death != 0 && t.death <= t.birth) {
      throw std::invalid_argument("trajectory " + std::to_string(i) + ": death must follow birth");
    }
  }
  for (const auto& b : c.birth.components) {
    if (b.existence < 0.0 || b.existence > 1.0) throw std::invalid_argument("birth existence outside [0,1]");
  }
  if (c.ospa.cutoff <= 0.0 || c.ospa.order < 1.0) throw std::invalid_argument("invalid OSPA parameters");
  const auto s = c.sensor();
  if (const auto* t = std::get_if<TbdModel>(&s)) {
    if (t->grid.cells() <= 0 || t->source_intensity <= 0.0 || t->blur_var <= 0.0 ||
        t->noise_var <= 0.0 || t->template_half < 0) {
      throw std::invalid_argument("invalid TBD sensor parameters");
    }
  } else {
    const auto& a = std::get<AcousticModel>(s);
    if (a.amplitude <= 0.0 || a.path_loss <= 0.0 || a.noise_var <= 0.0 || a.min_range <= 0.0) {
      throw std::invalid_argument("invalid acoustic sensor parameters");
    }
  }
}

}  // namespace gomtrack::harness
