#include "gomtrack/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gomtrack {

namespace {

bool lexicographic_less(std::span<const Kinematic> a, std::span<const Kinematic> b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (int i = 0; i < 4; ++i) {
      if (a[k][i] < b[k][i]) return true;
      if (b[k][i] < a[k][i]) return false;
    }
  }
  return false;
}

bool bitwise_equal(std::span<const Kinematic> a, std::span<const Kinematic> b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) return false;
  }
  return true;
}

}  // namespace

std::string to_string(const Label& label) {
  return "(" + std::to_string(label.birth_time) + "," + std::to_string(label.birth_index) + ")";
}

bool is_label_set(const LabelSet& labels) {
  return std::adjacent_find(labels.begin(), labels.end(),
                            [](const Label& a, const Label& b) { return !(a < b); }) ==
         labels.end();
}

bool contains(const LabelSet& labels, const Label& label) {
  return std::binary_search(labels.begin(), labels.end(), label);
}

bool includes(const LabelSet& superset, const LabelSet& subset) {
  return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

// ---- ParticleCloud ----

void ParticleCloud::add(double weight, const Kinematic& state) {
  weights.push_back(weight);
  states.push_back(state);
}

double ParticleCloud::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Kinematic ParticleCloud::mean() const {
  Kinematic sum = Kinematic::Zero();
  double total = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    sum += weights[j] * states[j];
    total += weights[j];
  }
  if (total <= 0.0) return Kinematic::Zero();
  return sum / total;
}

void ParticleCloud::normalize() {
  const double total = total_weight();
  if (total <= 0.0) throw std::invalid_argument("cannot normalize a zero-mass particle cloud");
  for (auto& w : weights) w /= total;
}

void ParticleCloud::scale(double factor) {
  for (auto& w : weights) w *= factor;
}

void ParticleCloud::compact() {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lexicographic_less({&states[a], 1}, {&states[b], 1});
  });
  ParticleCloud merged;
  for (std::size_t idx : order) {
    if (!merged.empty() && merged.states.back() == states[idx]) {
      merged.weights.back() += weights[idx];
    } else {
      merged.add(weights[idx], states[idx]);
    }
  }
  *this = std::move(merged);
}

// ---- JointParticleSet ----

JointParticleSet::JointParticleSet(LabelSet labels) : labels_(std::move(labels)) {
  if (!is_label_set(labels_)) throw std::invalid_argument("label set must be sorted and distinct");
}

void JointParticleSet::reserve(std::size_t particles) {
  weights_.reserve(particles);
  states_.reserve(particles * dimension());
}

void JointParticleSet::add(double weight, std::span<const Kinematic> states) {
  if (states.size() != dimension()) {
    throw std::invalid_argument("joint particle needs one state per label");
  }
  weights_.push_back(weight);
  states_.insert(states_.end(), states.begin(), states.end());
}

std::size_t JointParticleSet::coordinate_of(const Label& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    throw std::out_of_range("label " + to_string(label) + " not in joint particle set");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

ParticleCloud JointParticleSet::marginal(std::size_t coordinate) const {
  ParticleCloud cloud;
  cloud.weights.assign(weights_.begin(), weights_.end());
  cloud.states.reserve(size());
  for (std::size_t j = 0; j < size(); ++j) cloud.states.push_back(state(j, coordinate));
  return cloud;
}

double JointParticleSet::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

void JointParticleSet::normalize() {
  const double total = total_weight();
  if (total <= 0.0) throw std::invalid_argument("cannot normalize a zero-mass joint particle set");
  for (auto& w : weights_) w /= total;
}

void JointParticleSet::compact() {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lexicographic_less(particle(a), particle(b));
  });
  JointParticleSet merged(labels_);
  merged.reserve(size());
  for (std::size_t idx : order) {
    if (!merged.empty() && bitwise_equal(merged.particle(merged.size() - 1), particle(idx))) {
      merged.weights_.back() += weights_[idx];
    } else {
      merged.add(weights_[idx], particle(idx));
    }
  }
  *this = std::move(merged);
}

// ---- densities ----

double LmoDensity::total_weight() const {
  double total = 0.0;
  for (const auto& [labels, hyp] : hypotheses) total += hyp.weight;
  return total;
}

void LmoDensity::normalize() {
  const double total = total_weight();
  if (total <= 0.0) throw std::invalid_argument("cannot normalize an LMO density with zero mass");
  for (auto& [labels, hyp] : hypotheses) hyp.weight /= total;
}

LabelSet LmoDensity::labels() const {
  LabelSet all;
  for (const auto& [labels, hyp] : hypotheses) all.insert(all.end(), labels.begin(), labels.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

LabelSet LmbDensity::labels() const {
  LabelSet all;
  all.reserve(tracks.size());
  for (const auto& [label, track] : tracks) all.push_back(label);
  return all;
}

double LabeledPhd::mass(const Label& label) const {
  auto it = per_label.find(label);
  return it == per_label.end() ? 0.0 : it->second.total_weight();
}

double LabeledPhd::total_mass() const {
  double total = 0.0;
  for (const auto& [label, cloud] : per_label) total += cloud.total_weight();
  return total;
}

void validate(const LmoDensity& lmo, double tolerance) {
  if (std::abs(lmo.total_weight() - 1.0) > tolerance) {
    throw std::invalid_argument("LMO hypothesis weights do not sum to one");
  }
  for (const auto& [labels, hyp] : lmo.hypotheses) {
    if (hyp.weight < 0.0 || hyp.weight > 1.0 + tolerance) {
      throw std::invalid_argument("LMO hypothesis weight outside [0,1]");
    }
    if (hyp.joint.labels() != labels) {
      throw std::invalid_argument("joint particle label set differs from hypothesis key");
    }
    if (std::abs(hyp.joint.total_weight() - 1.0) > tolerance) {
      throw std::invalid_argument("joint particle weights do not sum to one");
    }
    for (const auto& x : hyp.joint.states()) {
      if (!x.allFinite()) throw std::invalid_argument("non-finite joint particle state");
    }
  }
}

void validate(const LmbDensity& lmb, double tolerance) {
  for (const auto& [label, track] : lmb.tracks) {
    if (track.existence < 0.0 || track.existence > 1.0 + tolerance) {
      throw std::invalid_argument("existence probability of " + to_string(label) +
                                  " outside [0,1]");
    }
    if (std::abs(track.density.total_weight() - 1.0) > tolerance) {
      throw std::invalid_argument("track " + to_string(label) + " weights do not sum to one");
    }
    for (const auto& x : track.density.states) {
      if (!x.allFinite()) throw std::invalid_argument("non-finite track particle state");
    }
  }
}

}  // namespace gomtrack
