#include "gomtrack/motion.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gomtrack {

std::vector<WeightedState> Dynamics::transition_support(const Kinematic&) const {
  throw std::logic_error("dynamics has no finite transition support; use sampled filtering");
}

// ---- MotionModel ----

MotionModel::MotionModel(const Matrix4& transition, const Matrix4& process_noise,
                         double survival_prob, double dt)
    : transition_(transition),
      process_noise_(process_noise),
      noise_factor_(psd_factor(process_noise)),
      survival_prob_(survival_prob),
      dt_(dt) {
  if (survival_prob < 0.0 || survival_prob > 1.0) {
    throw std::invalid_argument("survival probability must be in [0,1]");
  }
  if (!process_noise.isApprox(process_noise.transpose(), 1e-12)) {
    throw std::invalid_argument("process noise must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix4> eig(process_noise);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("process noise must be positive semi-definite");
  }
  const Matrix4 regularized = process_noise + 1e-12 * Matrix4::Identity();
  Eigen::LDLT<Matrix4> ldlt(regularized);
  precision_ = ldlt.solve(Matrix4::Identity());
  const double log_det = ldlt.vectorD().array().log().sum();
  log_normalizer_ = -0.5 * (4.0 * std::log(2.0 * std::numbers::pi) + log_det);
}

MotionModel MotionModel::constant_velocity(double dt, double sigma_v, double survival_prob) {
  Matrix4 f = Matrix4::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  const double q11 = std::pow(dt, 4) / 3.0;
  const double q12 = std::pow(dt, 3) / 2.0;
  const double q22 = dt * dt;
  Matrix4 q = Matrix4::Zero();
  q(0, 0) = q(1, 1) = q11;
  q(0, 2) = q(2, 0) = q(1, 3) = q(3, 1) = q12;
  q(2, 2) = q(3, 3) = q22;
  MotionModel model(f, sigma_v * sigma_v * q, survival_prob, dt);
  model.sigma_v_ = sigma_v;
  return model;
}

Kinematic MotionModel::propagate(const Kinematic& x, Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Kinematic n;
  for (int i = 0; i < 4; ++i) n[i] = normal(rng);
  return transition_ * x + noise_factor_ * n;
}

double MotionModel::survival_prob(const LabeledState&) const { return survival_prob_; }

double MotionModel::transition_density(const Kinematic& next, const Kinematic& x) const {
  const Kinematic d = next - transition_ * x;
  return std::exp(log_normalizer_ - 0.5 * d.dot(precision_ * d));
}

// ---- DiscreteMotion ----

DiscreteMotion::DiscreteMotion(std::vector<Kinematic> states, Eigen::MatrixXd transition,
                               std::vector<double> survival)
    : states_(std::move(states)), transition_(std::move(transition)), survival_(std::move(survival)) {
  const auto n = static_cast<Eigen::Index>(states_.size());
  if (transition_.rows() != n || transition_.cols() != n || survival_.size() != states_.size()) {
    throw std::invalid_argument("discrete motion dimensions disagree");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(transition_.row(i).sum() - 1.0) > 1e-12 || transition_.row(i).minCoeff() < 0.0) {
      throw std::invalid_argument("discrete transition rows must be probability vectors");
    }
  }
}

std::size_t DiscreteMotion::index_of(const Kinematic& x) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == x) return i;
  }
  throw std::out_of_range("state is not part of the discrete state space");
}

Kinematic DiscreteMotion::propagate(const Kinematic& x, Rng& rng) const {
  const Eigen::VectorXd row = transition_.row(static_cast<Eigen::Index>(index_of(x))).transpose();
  WeightedIndexSampler sampler(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
  return states_[sampler(rng)];
}

double DiscreteMotion::survival_prob(const LabeledState& x) const {
  return survival_[index_of(x.kinematic)];
}

std::vector<WeightedState> DiscreteMotion::transition_support(const Kinematic& x) const {
  const auto from = static_cast<Eigen::Index>(index_of(x));
  std::vector<WeightedState> out;
  for (std::size_t j = 0; j < states_.size(); ++j) {
    const double p = transition_(from, static_cast<Eigen::Index>(j));
    if (p > 0.0) out.push_back({p, states_[j]});
  }
  return out;
}

// ---- births ----

Label birth_label(std::uint32_t time, std::size_t component) {
  return Label{time, static_cast<std::uint32_t>(component + 1)};
}

LmbDensity sample_birth(const BirthModel& birth, std::uint32_t time, std::size_t particles,
                        Rng& rng) {
  LmbDensity out;
  const double w = 1.0 / static_cast<double>(particles);
  for (std::size_t i = 0; i < birth.components.size(); ++i) {
    const auto& c = birth.components[i];
    Track track{c.existence, {}};
    track.density.weights.assign(particles, w);
    track.density.states.reserve(particles);
    if (!c.support.empty()) {
      std::vector<double> probs;
      for (const auto& s : c.support) probs.push_back(s.probability);
      WeightedIndexSampler sampler(probs);
      for (std::size_t j = 0; j < particles; ++j) {
        track.density.states.push_back(c.support[sampler(rng)].state);
      }
    } else {
      GaussianSampler sampler(c.mean, c.covariance);
      for (std::size_t j = 0; j < particles; ++j) track.density.states.push_back(sampler(rng));
    }
    out.tracks.emplace(birth_label(time, i), std::move(track));
  }
  return out;
}

LmbDensity enumerate_birth(const BirthModel& birth, std::uint32_t time) {
  LmbDensity out;
  for (std::size_t i = 0; i < birth.components.size(); ++i) {
    const auto& c = birth.components[i];
    if (c.support.empty()) {
      throw std::logic_error("exhaustive births need a finite support for every component");
    }
    Track track{c.existence, {}};
    for (const auto& s : c.support) track.density.add(s.probability, s.state);
    track.density.normalize();
    out.tracks.emplace(birth_label(time, i), std::move(track));
  }
  return out;
}

}  // namespace gomtrack
