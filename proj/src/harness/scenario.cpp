#include "gomtrack/harness/scenario.hpp"

#include <stdexcept>

namespace gomtrack::harness {

Truth generate_truth(const ScenarioConfig& config, const RandomStream& stream) {
  const auto motion = config.truth_motion();
  Truth truth(config.steps + 1);
  for (std::size_t i = 0; i < config.trajectories.size(); ++i) {
    const auto& t = config.trajectories[i];
    if (t.death != 0 && t.death <= t.birth) throw std::invalid_argument("invalid trajectory window");
    const std::uint32_t end = t.death == 0 ? config.steps + 1 : std::min(t.death, config.steps + 1);
    auto rng = stream.child(i).engine();
    const Label label{t.birth, static_cast<std::uint32_t>(i + 1)};
    Kinematic x = t.initial;
    for (std::uint32_t k = t.birth; k < end; ++k) {
      if (k > t.birth) x = motion.propagate(x, rng);
      truth[k].push_back({x, label});
    }
  }
  return truth;
}

std::vector<ObservationFrame> generate_frames(const ScenarioConfig& config, const Sensor& sensor,
                                              const Truth& truth, const RandomStream& stream) {
  std::vector<ObservationFrame> frames(config.steps + 1);
  for (std::uint32_t k = 1; k <= config.steps; ++k) {
    std::vector<Kinematic> xs;
    for (const auto& o : truth[k]) xs.push_back(o.kinematic);
    auto rng = stream.child(k).engine();
    frames[k] = sample_frame(sensor, xs, rng);
  }
  return frames;
}

LmbDensity initial_tracks(const ScenarioConfig& config, const Truth& truth,
                          const RandomStream& stream) {
  LmbDensity lmb;
  const std::size_t n = config.filter_config.particles;
  auto add = [&](const Label& label, double existence, const Kinematic& mean, const Matrix4& cov) {
    auto rng = stream.child(stream_ordinal(label)).engine();
    GaussianSampler sampler(mean, cov);
    Track track{existence, {}};
    track.density.weights.assign(n, 1.0 / static_cast<double>(n));
    track.density.states.reserve(n);
    for (std::size_t j = 0; j < n; ++j) track.density.states.push_back(sampler(rng));
    if (!lmb.tracks.emplace(label, std::move(track)).second) {
      throw std::invalid_argument("duplicate initial track " + to_string(label));
    }
  };
  for (const auto& t : config.init_tracks) add(t.label, t.existence, t.mean, t.covariance);
  if (config.known_init.enabled) {
    const Matrix4 cov = config.known_init.covariance_diag.asDiagonal();
    for (const auto& o : truth.at(0)) {
      add(Label{0, o.label.birth_index}, config.known_init.existence, o.kinematic, cov);
    }
  }
  return lmb;
}

}  // namespace gomtrack::harness
