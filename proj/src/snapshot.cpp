#include "gomtrack/snapshot.hpp"

#include <stdexcept>

namespace gomtrack {

namespace {

using nlohmann::json;

json states_to_json(std::span<const Kinematic> states) {
  json out = json::array();
  for (const auto& x : states) out.push_back({x[0], x[1], x[2], x[3]});
  return out;
}

Kinematic state_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("state must have 4 entries");
  return Kinematic(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

void check_header(const json& j, const char* kind) {
  if (j.value("version", -1) != kSnapshotVersion) {
    throw std::invalid_argument("unsupported snapshot version");
  }
  if (j.value("kind", std::string{}) != kind) {
    throw std::invalid_argument(std::string("snapshot is not of kind ") + kind);
  }
}

}  // namespace

json to_json(const Label& label) { return json::array({label.birth_time, label.birth_index}); }

Label label_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("label must be [time, index]");
  return Label{j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
}

json snapshot(const LmbDensity& lmb) {
  json tracks = json::array();
  for (const auto& [label, track] : lmb.tracks) {
    tracks.push_back({{"label", to_json(label)},
                      {"existence", track.existence},
                      {"weights", track.density.weights},
                      {"states", states_to_json(track.density.states)}});
  }
  return {{"version", kSnapshotVersion}, {"kind", "lmb"}, {"tracks", std::move(tracks)}};
}

json snapshot(const LmoDensity& lmo) {
  json hypotheses = json::array();
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    json ls = json::array();
    for (const auto& l : labels) ls.push_back(to_json(l));
    json ws(std::vector<double>(hyp.joint.weights().begin(), hyp.joint.weights().end()));
    hypotheses.push_back({{"labels", std::move(ls)},
                          {"weight", hyp.weight},
                          {"weights", std::move(ws)},
                          {"states", states_to_json(hyp.joint.states())}});
  }
  return {{"version", kSnapshotVersion}, {"kind", "lmo"}, {"hypotheses", std::move(hypotheses)}};
}

LmbDensity lmb_from_snapshot(const json& j) {
  check_header(j, "lmb");
  LmbDensity lmb;
  for (const auto& t : j.at("tracks")) {
    Track track{t.at("existence").get<double>(), {}};
    const auto& weights = t.at("weights");
    const auto& states = t.at("states");
    if (weights.size() != states.size()) throw std::invalid_argument("track weights/states differ");
    for (std::size_t i = 0; i < weights.size(); ++i) {
      track.density.add(weights[i].get<double>(), state_from_json(states[i]));
    }
    lmb.tracks.emplace(label_from_json(t.at("label")), std::move(track));
  }
  return lmb;
}

LmoDensity lmo_from_snapshot(const json& j) {
  check_header(j, "lmo");
  LmoDensity lmo;
  for (const auto& h : j.at("hypotheses")) {
    LabelSet labels;
    for (const auto& l : h.at("labels")) labels.push_back(label_from_json(l));
    if (!is_label_set(labels)) throw std::invalid_argument("hypothesis labels must be sorted and distinct");
    JointParticleSet joint(labels);
    const auto& weights = h.at("weights");
    const auto& states = h.at("states");
    if (states.size() != weights.size() * labels.size()) {
      throw std::invalid_argument("hypothesis weights/states differ");
    }
    std::vector<Kinematic> particle(labels.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      for (std::size_t k = 0; k < labels.size(); ++k) {
        particle[k] = state_from_json(states[i * labels.size() + k]);
      }
      joint.add(weights[i].get<double>(), particle);
    }
    lmo.hypotheses.emplace(std::move(labels), Hypothesis{h.at("weight").get<double>(), std::move(joint)});
  }
  return lmo;
}

}  // namespace gomtrack
