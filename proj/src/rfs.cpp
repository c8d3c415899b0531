#include "gomtrack/rfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gomtrack {

namespace {

using StateKey = std::vector<double>;

StateKey flatten(std::span<const Kinematic> states) {
  StateKey key;
  key.reserve(states.size() * 4);
  for (const auto& x : states) key.insert(key.end(), x.data(), x.data() + 4);
  return key;
}

/// Probability of every (label set, state tuple) atom of a discrete LMO density.
std::map<LabelSet, std::map<StateKey, double>> atoms(const LmoDensity& lmo) {
  std::map<LabelSet, std::map<StateKey, double>> out;
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    if (hyp.weight <= 0.0) continue;
    auto& table = out[labels];
    const double total = hyp.joint.total_weight();
    for (std::size_t j = 0; j < hyp.joint.size(); ++j) {
      table[flatten(hyp.joint.particle(j))] += hyp.weight * hyp.joint.weight(j) / total;
    }
  }
  return out;
}

const Track& track_of(const LmbDensity& lmb, const Label& label) {
  auto it = lmb.tracks.find(label);
  if (it == lmb.tracks.end()) throw std::out_of_range("no track " + to_string(label));
  return it->second;
}

}  // namespace

std::map<LabelSet, double> lmb_label_set_weights(const LmbDensity& lmb, const LabelSet& labels,
                                                 double floor) {
  if (labels.size() > kMaxEnumeratedLabels) {
    throw EnumerationLimit("refusing to enumerate label sets over " +
                           std::to_string(labels.size()) + " labels");
  }
  std::vector<double> existence;
  existence.reserve(labels.size());
  for (const auto& label : labels) existence.push_back(track_of(lmb, label).existence);

  // bound[i] = best achievable product over labels i..n-1
  std::vector<double> bound(labels.size() + 1, 1.0);
  for (std::size_t i = labels.size(); i-- > 0;) {
    bound[i] = bound[i + 1] * std::max(existence[i], 1.0 - existence[i]);
  }

  std::map<LabelSet, double> out;
  LabelSet current;
  auto visit = [&](auto&& self, std::size_t i, double weight) -> void {
    if (weight <= 0.0 || weight * bound[i] < floor) return;
    if (i == labels.size()) {
      out.emplace(current, weight);
      return;
    }
    self(self, i + 1, weight * (1.0 - existence[i]));
    current.push_back(labels[i]);
    self(self, i + 1, weight * existence[i]);
    current.pop_back();
  };
  visit(visit, 0, 1.0);
  return out;
}

JointParticleSet product_joint(const LmbDensity& lmb, const LabelSet& labels,
                               std::size_t particles, Rng& rng) {
  JointParticleSet joint(labels);
  if (labels.empty()) {
    joint.add(1.0, {});
    return joint;
  }
  std::vector<const Track*> tracks;
  std::vector<WeightedIndexSampler> samplers;
  for (const auto& label : labels) {
    tracks.push_back(&track_of(lmb, label));
    samplers.emplace_back(tracks.back()->density.weights);
  }
  joint.reserve(particles);
  std::vector<Kinematic> states(labels.size());
  const double w = 1.0 / static_cast<double>(particles);
  for (std::size_t j = 0; j < particles; ++j) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      states[k] = tracks[k]->density.states[samplers[k](rng)];
    }
    joint.add(w, states);
  }
  return joint;
}

JointParticleSet product_joint(const LmbDensity& lmb, const LabelSet& labels) {
  JointParticleSet joint(labels);
  std::vector<const ParticleCloud*> clouds;
  for (const auto& label : labels) {
    const auto& cloud = track_of(lmb, label).density;
    if (cloud.empty()) throw std::invalid_argument("track " + to_string(label) + " has no particles");
    clouds.push_back(&cloud);
  }
  std::vector<std::size_t> index(labels.size(), 0);
  std::vector<Kinematic> states(labels.size());
  const double total = [&] {
    double t = 1.0;
    for (const auto* c : clouds) t *= c->total_weight();
    return t;
  }();
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      w *= clouds[k]->weights[index[k]];
      states[k] = clouds[k]->states[index[k]];
    }
    joint.add(w / total, states);
    std::size_t k = labels.size();
    while (k > 0) {
      --k;
      if (++index[k] < clouds[k]->size()) break;
      index[k] = 0;
      if (k == 0) return joint;
    }
    if (labels.empty()) return joint;
  }
}

LmoDensity lmb_to_lmo(const LmbDensity& lmb) {
  LmoDensity lmo;
  for (auto& [labels, weight] : lmb_label_set_weights(lmb, lmb.labels())) {
    lmo.hypotheses.emplace(labels, Hypothesis{weight, product_joint(lmb, labels)});
  }
  return lmo;
}

LmoDensity lmb_to_lmo(const LmbDensity& lmb, std::size_t particles, const RandomStream& stream) {
  LmoDensity lmo;
  std::uint64_t ordinal = 0;
  for (auto& [labels, weight] : lmb_label_set_weights(lmb, lmb.labels())) {
    auto rng = stream.child(ordinal++).engine();
    lmo.hypotheses.emplace(labels, Hypothesis{weight, product_joint(lmb, labels, particles, rng)});
  }
  return lmo;
}

LabeledPhd labeled_phd_lmo(const LmoDensity& lmo) {
  LabeledPhd phd;
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    const auto& joint = hyp.joint;
    const double total = joint.total_weight();
    for (std::size_t k = 0; k < labels.size(); ++k) {
      auto& cloud = phd.per_label[labels[k]];
      for (std::size_t j = 0; j < joint.size(); ++j) {
        cloud.add(hyp.weight * joint.weight(j) / total, joint.state(j, k));
      }
    }
  }
  return phd;
}

LabeledPhd labeled_phd_lmb(const LmbDensity& lmb) {
  LabeledPhd phd;
  for (const auto& [label, track] : lmb.tracks) {
    ParticleCloud cloud = track.density;
    const double total = cloud.total_weight();
    cloud.scale(total > 0.0 ? track.existence / total : 0.0);
    phd.per_label.emplace(label, std::move(cloud));
  }
  return phd;
}

LmbDensity best_lmb_approx(const LmoDensity& lmo) {
  std::map<Label, double> existence;
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    for (const auto& label : labels) existence[label] += hyp.weight;
  }
  LmbDensity lmb;
  for (const auto& [label, r] : existence) {
    if (r < kMinCollapsedExistence) continue;
    lmb.tracks.emplace(label, Track{std::min(r, 1.0), {}});
  }
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    const auto& joint = hyp.joint;
    const double total = joint.total_weight();
    for (std::size_t k = 0; k < labels.size(); ++k) {
      auto it = lmb.tracks.find(labels[k]);
      if (it == lmb.tracks.end()) continue;
      const double scale = hyp.weight / (total * existence[labels[k]]);
      auto& cloud = it->second.density;
      for (std::size_t j = 0; j < joint.size(); ++j) {
        cloud.add(joint.weight(j) * scale, joint.state(j, k));
      }
    }
  }
  return lmb;
}

double kld_discrete(const LmoDensity& p, const LmoDensity& q) {
  const auto p_atoms = atoms(p);
  const auto q_atoms = atoms(q);
  double kld = 0.0;
  for (const auto& [labels, table] : p_atoms) {
    auto q_table = q_atoms.find(labels);
    for (const auto& [key, prob] : table) {
      if (prob <= 0.0) continue;
      if (q_table == q_atoms.end()) return std::numeric_limits<double>::infinity();
      auto q_it = q_table->second.find(key);
      if (q_it == q_table->second.end() || q_it->second <= 0.0) {
        return std::numeric_limits<double>::infinity();
      }
      kld += prob * std::log(prob / q_it->second);
    }
  }
  return kld;
}

std::vector<LabeledState> extract_estimates(const LmbDensity& lmb, double existence_threshold) {
  std::vector<LabeledState> out;
  for (const auto& [label, track] : lmb.tracks) {
    if (track.existence > existence_threshold) out.push_back({track.density.mean(), label});
  }
  return out;
}

std::vector<double> cardinality_distribution(const LmoDensity& lmo) {
  std::vector<double> out(1, 0.0);
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    if (labels.size() >= out.size()) out.resize(labels.size() + 1, 0.0);
    out[labels.size()] += hyp.weight;
  }
  return out;
}

double expected_cardinality(const LmoDensity& lmo) {
  const auto dist = cardinality_distribution(lmo);
  double mean = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) mean += static_cast<double>(n) * dist[n];
  return mean;
}

void prune_tracks(LmbDensity& lmb, double threshold) {
  std::erase_if(lmb.tracks, [&](const auto& entry) { return entry.second.existence < threshold; });
}

}  // namespace gomtrack
