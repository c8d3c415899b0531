#pragma once

// Brute-force reference computations on finite kinematic spaces. Nothing here calls filter
// code: densities are tables over (label set, state tuple) and every recursion is a direct
// sum over the table.

#include "gomtrack/motion.hpp"
#include "gomtrack/sensors.hpp"
#include "gomtrack/types.hpp"

#include <Eigen/Core>

#include <compare>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using gomtrack::Kinematic;
using gomtrack::Label;
using gomtrack::LabelSet;

/// A finite state space with a Markov transition and per-state survival.
struct Space {
  std::vector<Kinematic> states;
  Eigen::MatrixXd transition;  // rows sum to one
  std::vector<double> survival;

  int index_of(const Kinematic& x) const;
};

/// Labeled multi-object point: a label set and one state index per label (label order).
struct Point {
  LabelSet labels;
  std::vector<int> states;
  friend auto operator<=>(const Point&, const Point&) = default;
};

using Table = std::map<Point, double>;

struct Birth {
  Label label;
  double existence = 0.0;
  std::vector<double> probabilities;  // over Space::states
};

/// Per-label existence and spatial probability vector.
struct Bernoulli {
  double existence = 0.0;
  std::vector<double> p;
};
using Lmb = std::map<Label, Bernoulli>;

using JointLogLikelihood = std::function<double(const std::vector<Kinematic>&)>;

Table from_lmo(const gomtrack::LmoDensity& lmo, const Space& space);
Table from_lmb(const Lmb& lmb);
gomtrack::LmbDensity to_lmb_density(const Lmb& lmb, const Space& space);

/// Chapman-Kolmogorov with the standard transition: survive, move, add independent births.
Table predict(const Table& prior, const Space& space, const std::vector<Birth>& births);
/// Bayes rule with a generic likelihood of the label-ordered state tuple.
Table bayes(const Table& prior, const Space& space, const JointLogLikelihood& ll);

std::map<LabelSet, double> label_set_weights(const Table& t);
/// Existence = total mass of points containing the label; p = normalized marginal.
Lmb collapse(const Table& t, std::size_t states);
/// Unnormalized labeled PHD: v[label][state].
std::map<Label, std::vector<double>> phd(const Table& t, std::size_t states);
double kld(const Table& p, const Table& q);

/// Random normalized LMO table over `labels` with every hypothesis drawn from the full space.
Table random_table(const LabelSet& labels, std::size_t states, std::mt19937_64& rng);
gomtrack::LmoDensity to_lmo(const Table& t, const Space& space);

/// Random LMB over `labels` with existence in [0.2, 0.9] and full-support spatial vectors.
Lmb random_lmb(const LabelSet& labels, std::size_t states, std::mt19937_64& rng);

/// Library views of the toy space: dynamics and a birth model with finite supports.
gomtrack::DiscreteMotion motion_of(const Space& space);
gomtrack::BirthModel birth_model_of(const std::vector<Birth>& births, const Space& space);

/// Symmetric set likelihood: per-object terms plus a pairwise interaction, so it does not
/// factor over objects.
struct ToyLikelihood {
  const Space* space = nullptr;
  std::vector<double> single;
  Eigen::MatrixXd pair;
  double empty = 0.0;

  double operator()(const std::vector<Kinematic>& xs) const;
  JointLogLikelihood table() const;
  gomtrack::LogLikelihood library() const;
};
ToyLikelihood random_likelihood(const Space& space, std::mt19937_64& rng);

/// Three states on a line with a row-stochastic transition and state-dependent survival.
Space three_state_space(std::mt19937_64& rng);

}  // namespace oracle
