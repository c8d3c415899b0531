#include "gomtrack/motion.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <set>

using namespace gomtrack;

TEST(MotionModel, ConstantVelocityBlocks) {
  const auto m = MotionModel::constant_velocity(2.0, 0.5, 0.98);
  EXPECT_EQ(m.transition()(0, 2), 2.0);
  EXPECT_EQ(m.transition()(1, 3), 2.0);
  EXPECT_EQ(m.transition()(2, 0), 0.0);
  const double s2 = 0.25;
  EXPECT_DOUBLE_EQ(m.process_noise()(0, 0), s2 * 16.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.process_noise()(0, 2), s2 * 4.0);
  EXPECT_DOUBLE_EQ(m.process_noise()(3, 3), s2 * 4.0);
  EXPECT_EQ(m.sigma_v(), 0.5);
  EXPECT_EQ(m.dt(), 2.0);
}

TEST(MotionModel, ProcessNoiseIsPsd) {
  for (double dt : {0.1, 1.0, 3.0}) {
    for (double sv : {0.0, 0.01, 0.7, 5.0}) {
      const auto m = MotionModel::constant_velocity(dt, sv, 0.5);
      const Matrix4& q = m.process_noise();
      EXPECT_TRUE(q.isApprox(q.transpose()));
      Eigen::SelfAdjointEigenSolver<Matrix4> eig(q);
      EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
    }
  }
}

TEST(MotionModel, RejectsInvalidParameters) {
  EXPECT_THROW(MotionModel::constant_velocity(1.0, 0.1, 1.5), std::invalid_argument);
  Matrix4 bad = Matrix4::Identity();
  bad(0, 0) = -1.0;
  EXPECT_THROW(MotionModel(Matrix4::Identity(), bad, 0.9, 1.0), std::invalid_argument);
}

TEST(Propagate, NoiselessIsConstantVelocity) {
  const auto m = MotionModel::constant_velocity(1.0, 0.0, 0.98);
  Rng rng(1);
  EXPECT_EQ(m.propagate(Kinematic(0, 0, 1, 0), rng), Kinematic(1, 0, 1, 0));
  EXPECT_EQ(m.propagate(Kinematic::Zero(), rng), Kinematic::Zero());
}

TEST(Propagate, NoiselessIsLinear) {
  const auto m = MotionModel::constant_velocity(0.7, 0.0, 1.0);
  Rng rng(2);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Kinematic x, y;
    for (int i = 0; i < 4; ++i) {
      x[i] = n(rng);
      y[i] = n(rng);
    }
    const double a = n(rng), b = n(rng);
    const Kinematic lhs = m.propagate(a * x + b * y, rng);
    const Kinematic rhs = a * m.propagate(x, rng) + b * m.propagate(y, rng);
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST(Propagate, SampleMeanMatchesTransition) {
  const auto m = MotionModel::constant_velocity(1.0, 0.7, 0.98);
  const Kinematic x0(10, -3, 1.5, 0.5);
  const Kinematic expected = m.transition() * x0;
  Rng rng(3);
  const int n = 100000;
  Kinematic sum = Kinematic::Zero();
  for (int i = 0; i < n; ++i) sum += m.propagate(x0, rng);
  const Kinematic mean = sum / n;
  for (int i = 0; i < 4; ++i) {
    const double sd = std::sqrt(m.process_noise()(i, i));
    EXPECT_NEAR(mean[i], expected[i], 3.0 * sd / std::sqrt(double(n)));
  }
}

TEST(TransitionDensity, PeakValue) {
  const auto m = MotionModel::constant_velocity(1.0, 0.7, 0.98);
  const Kinematic x(1, 2, 3, 4);
  const double peak = 1.0 / (std::pow(2.0 * std::numbers::pi, 2) * std::sqrt(m.process_noise().determinant()));
  EXPECT_NEAR(m.transition_density(m.transition() * x, x) / peak, 1.0, 1e-9);
}

TEST(TransitionDensity, IntegratesToOne) {
  const auto m = MotionModel::constant_velocity(1.0, 0.7, 0.98);
  const Kinematic x(0, 0, 1, -1);
  const Kinematic mu = m.transition() * x;
  const int k = 49;
  double sd[4], h[4];
  for (int i = 0; i < 4; ++i) {
    sd[i] = std::sqrt(m.process_noise()(i, i));
    h[i] = 12.0 * sd[i] / k;
  }
  double total = 0.0;
  Kinematic y;
  for (int a = 0; a < k; ++a) {
    y[0] = mu[0] - 6.0 * sd[0] + (a + 0.5) * h[0];
    for (int b = 0; b < k; ++b) {
      y[1] = mu[1] - 6.0 * sd[1] + (b + 0.5) * h[1];
      for (int c = 0; c < k; ++c) {
        y[2] = mu[2] - 6.0 * sd[2] + (c + 0.5) * h[2];
        for (int d = 0; d < k; ++d) {
          y[3] = mu[3] - 6.0 * sd[3] + (d + 0.5) * h[3];
          total += m.transition_density(y, x);
        }
      }
    }
  }
  EXPECT_NEAR(total * h[0] * h[1] * h[2] * h[3], 1.0, 1e-3);
}

TEST(TransitionDensity, DegenerateNoiseIsRegularized) {
  const auto m = MotionModel::constant_velocity(1.0, 0.0, 0.98);
  const double v = m.transition_density(Kinematic(1, 0, 1, 0), Kinematic(0, 0, 1, 0));
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

TEST(Survival, ConstantProbability) {
  const LabeledState s{Kinematic::Zero(), {0, 1}};
  EXPECT_EQ(MotionModel::constant_velocity(1, 0.1, 0.98).survival_prob(s), 0.98);
  EXPECT_EQ(MotionModel::constant_velocity(1, 0.1, 1.0).survival_prob(s), 1.0);
  EXPECT_EQ(MotionModel::constant_velocity(1, 0.1, 0.0).survival_prob(s), 0.0);
}

TEST(DiscreteMotion, SupportAndSurvival) {
  Eigen::MatrixXd t(2, 2);
  t << 0.25, 0.75, 0.0, 1.0;
  const DiscreteMotion m({Kinematic::Zero(), Kinematic::Ones()}, t, {0.9, 0.5});
  const auto s = m.transition_support(Kinematic::Zero());
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].probability, 0.75);
  EXPECT_EQ(m.transition_support(Kinematic::Ones()).size(), 1u);
  EXPECT_EQ(m.survival_prob({Kinematic::Ones(), {0, 1}}), 0.5);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(m.propagate(Kinematic::Ones(), rng), Kinematic::Ones());
  EXPECT_THROW(m.index_of(Kinematic::Constant(7)), std::out_of_range);
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.4, 0.0, 1.0;
  EXPECT_THROW(DiscreteMotion({Kinematic::Zero(), Kinematic::Ones()}, bad, {1, 1}), std::invalid_argument);
}

TEST(DiscreteMotion, GaussianModelHasNoFiniteSupport) {
  const auto m = MotionModel::constant_velocity(1.0, 0.1, 0.9);
  EXPECT_THROW(m.transition_support(Kinematic::Zero()), std::logic_error);
}

TEST(Birth, EmptyModelGivesNoTracks) {
  Rng rng(1);
  EXPECT_TRUE(sample_birth(BirthModel{}, 3, 10, rng).tracks.empty());
}

TEST(Birth, ZeroCovarianceGivesPointCloud) {
  BirthModel b;
  b.components.push_back({0.02, Kinematic(50, 180, 0, 0), Matrix4::Zero(), {}});
  Rng rng(1);
  const auto lmb = sample_birth(b, 4, 100, rng);
  const auto& t = lmb.tracks.at(Label{4, 1});
  EXPECT_EQ(t.existence, 0.02);
  for (const auto& x : t.density.states) EXPECT_LT((x - Kinematic(50, 180, 0, 0)).norm(), 1e-12);
}

TEST(Birth, LabelsFollowStepAndComponent) {
  BirthModel b;
  b.components.push_back({0.02, Kinematic(50, 180, 0, 0), Matrix4::Identity() * 2.0, {}});
  b.components.push_back({0.02, Kinematic(200, 105, 0, 0), Matrix4::Identity() * 2.0, {}});
  Rng rng(1);
  std::set<Label> seen;
  for (std::uint32_t k = 1; k <= 100; ++k) {
    for (const auto& [label, track] : sample_birth(b, k, 5, rng).tracks) {
      EXPECT_EQ(label.birth_time, k);
      EXPECT_TRUE(seen.insert(label).second) << to_string(label);
    }
  }
  EXPECT_EQ(birth_label(7, 1), (Label{7, 2}));
}

TEST(Birth, EnumeratedSupport) {
  BirthModel b;
  b.components.push_back({0.3, Kinematic::Zero(), Matrix4::Zero(),
                          {{1.0, Kinematic::Zero()}, {3.0, Kinematic::Ones()}}});
  const auto lmb = enumerate_birth(b, 2);
  const auto& t = lmb.tracks.at(Label{2, 1});
  EXPECT_DOUBLE_EQ(t.density.weights[1], 0.75);
  b.components.push_back({0.3, Kinematic::Zero(), Matrix4::Zero(), {}});
  EXPECT_THROW(enumerate_birth(b, 2), std::logic_error);
}
