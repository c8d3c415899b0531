#pragma once

#include "gomtrack/smc.hpp"
#include "gomtrack/types.hpp"

#include <cstdint>
#include <vector>

namespace gomtrack {

struct WeightedState {
  double probability = 0.0;
  Kinematic state = Kinematic::Zero();
};

/// Single-object dynamics of the standard transition kernel: survival plus a Markov
/// kinematic transition. Labels persist across the transition.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual Kinematic propagate(const Kinematic& x, Rng& rng) const = 0;
  virtual double survival_prob(const LabeledState& x) const = 0;
  /// Finite support of the transition from `x`. Only discrete dynamics provide one; it is
  /// what exhaustive (enumerated) filtering uses in place of sampling.
  virtual std::vector<WeightedState> transition_support(const Kinematic& x) const;
};

/// Linear-Gaussian constant-velocity motion with constant survival probability.
class MotionModel final : public Dynamics {
 public:
  MotionModel(const Matrix4& transition, const Matrix4& process_noise, double survival_prob,
              double dt);

  /// F = [I dt*I; 0 I], Q = sigma_v^2 [dt^4/3 I, dt^3/2 I; dt^3/2 I, dt^2 I].
  static MotionModel constant_velocity(double dt, double sigma_v, double survival_prob);

  Kinematic propagate(const Kinematic& x, Rng& rng) const override;
  double survival_prob(const LabeledState& x) const override;

  /// N(next; F x, Q). A singular Q is regularized with 1e-12 * I.
  double transition_density(const Kinematic& next, const Kinematic& x) const;

  const Matrix4& transition() const { return transition_; }
  const Matrix4& process_noise() const { return process_noise_; }
  double survival() const { return survival_prob_; }
  double dt() const { return dt_; }
  double sigma_v() const { return sigma_v_; }

 private:
  Matrix4 transition_;
  Matrix4 process_noise_;
  Matrix4 noise_factor_;
  Matrix4 precision_;
  double log_normalizer_ = 0.0;
  double survival_prob_ = 1.0;
  double dt_ = 1.0;
  double sigma_v_ = 0.0;
};

/// Markov chain over an explicitly listed finite set of kinematic states, with per-state
/// survival. Used to check the recursions exactly against brute-force enumeration.
class DiscreteMotion final : public Dynamics {
 public:
  /// transition(i, j) = P(next = states[j] | current = states[i]); rows must sum to one.
  DiscreteMotion(std::vector<Kinematic> states, Eigen::MatrixXd transition,
                 std::vector<double> survival);

  Kinematic propagate(const Kinematic& x, Rng& rng) const override;
  double survival_prob(const LabeledState& x) const override;
  std::vector<WeightedState> transition_support(const Kinematic& x) const override;

  const std::vector<Kinematic>& states() const { return states_; }
  std::size_t index_of(const Kinematic& x) const;
  double transition_prob(std::size_t from, std::size_t to) const { return transition_(from, to); }

 private:
  std::vector<Kinematic> states_;
  Eigen::MatrixXd transition_;
  std::vector<double> survival_;
};

/// Bernoulli birth component. The spatial density is Gaussian N(mean, covariance) unless
/// `support` lists a finite distribution, which then takes precedence.
struct BirthComponent {
  double existence = 0.0;
  Kinematic mean = Kinematic::Zero();
  Matrix4 covariance = Matrix4::Zero();
  std::vector<WeightedState> support;
};

/// LMB birth model; component i born at step k gets Label{k, i + 1}.
struct BirthModel {
  std::vector<BirthComponent> components;
};

Label birth_label(std::uint32_t time, std::size_t component);

/// Birth tracks for step `time` with `particles` draws per component.
LmbDensity sample_birth(const BirthModel& birth, std::uint32_t time, std::size_t particles,
                        Rng& rng);
/// Birth tracks with their exact finite support (every component must list one).
LmbDensity enumerate_birth(const BirthModel& birth, std::uint32_t time);

}  // namespace gomtrack
