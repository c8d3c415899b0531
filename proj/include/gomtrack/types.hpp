#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gomtrack {

/// Kinematic state [p_x, p_y, v_x, v_y] in meters and meters/second.
using Kinematic = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;
using Position = Eigen::Vector2d;

inline Position position_of(const Kinematic& x) { return x.head<2>(); }

/// Track identity: (time of birth, index among objects born at that time).
/// Ordered lexicographically, which also fixes the coordinate order inside joint particles.
struct Label {
  std::uint32_t birth_time = 0;
  std::uint32_t birth_index = 1;

  friend auto operator<=>(const Label&, const Label&) = default;
};

std::string to_string(const Label& label);

/// Sorted list of distinct labels.
using LabelSet = std::vector<Label>;

bool is_label_set(const LabelSet& labels);
bool contains(const LabelSet& labels, const Label& label);
/// True when every label of `subset` is in `superset`.
bool includes(const LabelSet& superset, const LabelSet& subset);

struct LabeledState {
  Kinematic kinematic = Kinematic::Zero();
  Label label;
};

/// Weighted single-object particle cloud. Weights are not required to sum to one; a
/// normalized cloud is a density, an unnormalized one carries mass (labeled PHD).
struct ParticleCloud {
  std::vector<double> weights;
  std::vector<Kinematic> states;

  std::size_t size() const { return weights.size(); }
  bool empty() const { return weights.empty(); }
  void add(double weight, const Kinematic& state);
  double total_weight() const;
  /// Weighted mean, normalized by the total weight.
  Kinematic mean() const;
  void normalize();
  void scale(double factor);
  /// Merges particles with bit-identical states and sorts them lexicographically.
  void compact();
};

/// Weighted multi-object particles sharing one label set. Particle j stores one kinematic
/// vector per label, in label order, contiguously.
class JointParticleSet {
 public:
  JointParticleSet() = default;
  explicit JointParticleSet(LabelSet labels);

  const LabelSet& labels() const { return labels_; }
  std::size_t dimension() const { return labels_.size(); }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  void reserve(std::size_t particles);
  void add(double weight, std::span<const Kinematic> states);

  double weight(std::size_t j) const { return weights_[j]; }
  std::span<const double> weights() const { return weights_; }
  std::span<double> weights() { return weights_; }
  std::span<const Kinematic> particle(std::size_t j) const {
    return std::span<const Kinematic>(states_).subspan(j * dimension(), dimension());
  }
  const Kinematic& state(std::size_t j, std::size_t coordinate) const {
    return states_[j * dimension() + coordinate];
  }
  /// All particle states, particle-major.
  std::span<const Kinematic> states() const { return states_; }

  /// Position of `label` inside the label set; throws if absent.
  std::size_t coordinate_of(const Label& label) const;
  /// Projects every particle onto one coordinate block, carrying its weight.
  ParticleCloud marginal(std::size_t coordinate) const;

  double total_weight() const;
  void normalize();
  void compact();

 private:
  LabelSet labels_;
  std::vector<double> weights_;
  std::vector<Kinematic> states_;
};

struct Hypothesis {
  double weight = 0.0;
  JointParticleSet joint;
};

/// Labeled multi-object density as a mixture over label sets: {(omega(I), P^(I))}.
struct LmoDensity {
  std::map<LabelSet, Hypothesis> hypotheses;

  double total_weight() const;
  void normalize();
  /// Union of all labels appearing in any hypothesis.
  LabelSet labels() const;
};

struct Track {
  double existence = 0.0;
  ParticleCloud density;
};

/// Labeled multi-Bernoulli density: one Bernoulli track per label.
struct LmbDensity {
  std::map<Label, Track> tracks;

  LabelSet labels() const;
};

/// Labeled first-order moment: per-label particle cloud whose total weight is its mass.
struct LabeledPhd {
  std::map<Label, ParticleCloud> per_label;

  double mass(const Label& label) const;
  double total_mass() const;
};

/// Throws std::invalid_argument when a density violates its normalization invariants.
void validate(const LmoDensity& lmo, double tolerance = 1e-9);
void validate(const LmbDensity& lmb, double tolerance = 1e-9);

}  // namespace gomtrack
