#include "gomtrack/types.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace gomtrack;

TEST(Label, OrdersLexicographically) {
  EXPECT_LT((Label{0, 2}), (Label{1, 1}));
  EXPECT_LT((Label{1, 1}), (Label{1, 2}));
  EXPECT_EQ((Label{3, 4}), (Label{3, 4}));
  EXPECT_EQ(to_string(Label{3, 4}), "(3,4)");
}

TEST(LabelSet, RequiresSortedDistinctLabels) {
  EXPECT_TRUE(is_label_set({}));
  EXPECT_TRUE(is_label_set({{0, 1}, {0, 2}, {1, 1}}));
  EXPECT_FALSE(is_label_set({{0, 2}, {0, 1}}));
  EXPECT_FALSE(is_label_set({{0, 1}, {0, 1}}));
  EXPECT_THROW(JointParticleSet({{0, 2}, {0, 1}}), std::invalid_argument);
}

TEST(LabelSet, InclusionQueries) {
  const LabelSet big{{0, 1}, {0, 2}, {2, 1}};
  EXPECT_TRUE(contains(big, {0, 2}));
  EXPECT_FALSE(contains(big, {1, 1}));
  EXPECT_TRUE(includes(big, {{0, 1}, {2, 1}}));
  EXPECT_TRUE(includes(big, {}));
  EXPECT_FALSE(includes(big, {{1, 1}}));
}

TEST(ParticleCloud, MeanIsWeightNormalized) {
  ParticleCloud c;
  c.add(1.0, Kinematic(0, 0, 0, 0));
  c.add(3.0, Kinematic(4, 8, 0, 0));
  EXPECT_DOUBLE_EQ(c.total_weight(), 4.0);
  EXPECT_DOUBLE_EQ(c.mean()[0], 3.0);
  EXPECT_DOUBLE_EQ(c.mean()[1], 6.0);
  c.normalize();
  EXPECT_DOUBLE_EQ(c.weights[1], 0.75);
}

TEST(ParticleCloud, CompactMergesIdenticalStates) {
  ParticleCloud c;
  c.add(0.25, Kinematic(1, 0, 0, 0));
  c.add(0.25, Kinematic(0, 0, 0, 0));
  c.add(0.5, Kinematic(1, 0, 0, 0));
  c.compact();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.states[0], Kinematic(0, 0, 0, 0));
  EXPECT_DOUBLE_EQ(c.weights[1], 0.75);
}

TEST(JointParticleSet, StoresParticleMajorBlocks) {
  JointParticleSet j({{0, 1}, {0, 2}});
  const Kinematic a(1, 2, 3, 4), b(5, 6, 7, 8);
  j.add(2.0, std::vector<Kinematic>{a, b});
  j.add(2.0, std::vector<Kinematic>{b, a});
  EXPECT_EQ(j.dimension(), 2u);
  EXPECT_EQ(j.state(1, 0), b);
  EXPECT_EQ(j.coordinate_of({0, 2}), 1u);
  EXPECT_THROW(j.coordinate_of({1, 1}), std::out_of_range);
  const auto m = j.marginal(0);
  EXPECT_EQ(m.states[0], a);
  EXPECT_EQ(m.states[1], b);
  EXPECT_DOUBLE_EQ(m.weights[0], 2.0);
  j.normalize();
  EXPECT_DOUBLE_EQ(j.total_weight(), 1.0);
}

TEST(JointParticleSet, RejectsWrongArity) {
  JointParticleSet j({{0, 1}});
  EXPECT_THROW(j.add(1.0, std::vector<Kinematic>{}), std::invalid_argument);
}

TEST(JointParticleSet, EmptyLabelSetHoldsZeroLengthParticles) {
  JointParticleSet j(LabelSet{});
  j.add(1.0, {});
  EXPECT_EQ(j.size(), 1u);
  EXPECT_TRUE(j.particle(0).empty());
}

TEST(Densities, ValidateChecksNormalization) {
  LmoDensity lmo;
  lmo.hypotheses.emplace(LabelSet{}, Hypothesis{0.4, JointParticleSet(LabelSet{})});
  lmo.hypotheses.at({}).joint.add(1.0, {});
  EXPECT_THROW(validate(lmo), std::invalid_argument);
  lmo.hypotheses.at({}).weight = 1.0;
  EXPECT_NO_THROW(validate(lmo));

  LmbDensity lmb;
  lmb.tracks[{0, 1}] = Track{1.2, {}};
  lmb.tracks[{0, 1}].density.add(1.0, Kinematic::Zero());
  EXPECT_THROW(validate(lmb), std::invalid_argument);
}
