#include "gomtrack/snapshot.hpp"

#include <gtest/gtest.h>

using namespace gomtrack;

TEST(Snapshot, LmbRoundTrip) {
  LmbDensity lmb;
  lmb.tracks[{0, 1}] = Track{0.25, {}};
  lmb.tracks[{0, 1}].density.add(0.5, Kinematic(1.5, -2, 0.25, 1e-17));
  lmb.tracks[{0, 1}].density.add(0.5, Kinematic(3, 4, 5, 6));
  lmb.tracks[{7, 2}] = Track{0.999, {}};
  lmb.tracks[{7, 2}].density.add(1.0, Kinematic(0.1, 0.2, 0.3, 0.4));
  const auto back = lmb_from_snapshot(nlohmann::json::parse(snapshot(lmb).dump()));
  ASSERT_EQ(back.labels(), lmb.labels());
  for (const auto& [label, t] : lmb.tracks) {
    EXPECT_EQ(back.tracks.at(label).existence, t.existence);
    EXPECT_EQ(back.tracks.at(label).density.weights, t.density.weights);
    EXPECT_EQ(back.tracks.at(label).density.states, t.density.states);
  }
}

TEST(Snapshot, LmoRoundTrip) {
  LmoDensity lmo;
  JointParticleSet empty(LabelSet{});
  empty.add(1.0, {});
  lmo.hypotheses.emplace(LabelSet{}, Hypothesis{0.4, empty});
  JointParticleSet two({{0, 1}, {2, 1}});
  two.add(0.3, std::vector<Kinematic>{Kinematic(1, 2, 3, 4), Kinematic(5, 6, 7, 8)});
  two.add(0.7, std::vector<Kinematic>{Kinematic(-1, 0, 0, 0), Kinematic(0, 0, 0, 1)});
  lmo.hypotheses.emplace(two.labels(), Hypothesis{0.6, two});
  const auto back = lmo_from_snapshot(nlohmann::json::parse(snapshot(lmo).dump()));
  ASSERT_EQ(back.hypotheses.size(), 2u);
  const auto& h = back.hypotheses.at(two.labels());
  EXPECT_EQ(h.weight, 0.6);
  ASSERT_EQ(h.joint.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(h.joint.weight(j), two.weight(j));
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(h.joint.state(j, k), two.state(j, k));
  }
  EXPECT_EQ(back.hypotheses.at({}).joint.size(), 1u);
}

TEST(Snapshot, RejectsVersionAndKindMismatch) {
  auto j = snapshot(LmbDensity{});
  j["version"] = kSnapshotVersion + 1;
  EXPECT_THROW(lmb_from_snapshot(j), std::invalid_argument);
  EXPECT_THROW(lmo_from_snapshot(snapshot(LmbDensity{})), std::invalid_argument);
  EXPECT_THROW(label_from_json(nlohmann::json::array({1})), std::invalid_argument);
  EXPECT_EQ(label_from_json(to_json(Label{4, 9})), (Label{4, 9}));
}
