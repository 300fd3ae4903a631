#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ideageo/error.hpp"
#include "ideageo/geography.hpp"
#include "ideageo/synth.hpp"

using namespace ideageo;

namespace {

SynthConfig small_config(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.n_participants = 18;
  c.days = 4;
  c.tokens_per_design = 40;
  return c;
}

bool in_unit_square(Point2 p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

}  // namespace

TEST(Utility, PeakValueAndDecay) {
  UtilityFunction u;
  EXPECT_DOUBLE_EQ(u(u.peak), u.base + u.height);
  const Point2 one_width{u.peak.x + u.width, u.peak.y};
  EXPECT_NEAR(u(one_width), u.base + u.height * std::exp(-0.5), 1e-12);
  EXPECT_LT(u({0.0, 1.0}), u(one_width));
}

TEST(SynthConfig, Validation) {
  auto bad = [](auto mutate) {
    SynthConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), Error);
  };
  bad([](SynthConfig& c) { c.n_groups = 0; });
  bad([](SynthConfig& c) { c.n_participants = 14; });
  bad([](SynthConfig& c) { c.days = 0; });
  bad([](SynthConfig& c) { c.posts_per_participant_day = 0.0; });
  bad([](SynthConfig& c) { c.tokens_per_design = 0; });
  bad([](SynthConfig& c) { c.evaluators = 0; });
  bad([](SynthConfig& c) { c.utility.width = 0.0; });
  bad([](SynthConfig& c) { c.score_noise = -1.0; });
  EXPECT_NO_THROW(SynthConfig{}.validate());
}

TEST(Generate, ProducesValidSession) {
  const auto out = generate_session(small_config(3));
  const auto& s = out.session;
  EXPECT_TRUE(validate(s).empty());
  EXPECT_EQ(s.participants.size(), 18u);
  ASSERT_EQ(s.groups.size(), 3u);
  EXPECT_EQ(s.days, 4);
  std::set<std::string> members;
  for (const auto& g : s.groups) {
    EXPECT_EQ(g.members.size(), 6u);
    EXPECT_EQ(g.placement.size(), g.members.size());
    members.insert(g.members.begin(), g.members.end());
  }
  EXPECT_EQ(members.size(), 18u);
  EXPECT_EQ(s.final_designs.size(), 18u * 3u);
  for (const auto& d : s.final_designs) {
    ASSERT_EQ(d.scores.size(), 3u);
    for (const double x : d.scores) {
      EXPECT_GE(x, 1.0);
      EXPECT_LE(x, 5.0);
    }
  }
}

TEST(Generate, SameSeedIdenticalDifferentSeedNot) {
  const auto a = generate_session(small_config(4));
  const auto b = generate_session(small_config(4));
  EXPECT_EQ(serialize_session(a.session), serialize_session(b.session));
  EXPECT_EQ(serialize_ground_truth(a.truth), serialize_ground_truth(b.truth));
  EXPECT_NE(serialize_session(generate_session(small_config(5)).session), serialize_session(a.session));
}

TEST(Generate, GroundTruthIsConsistent) {
  const auto out = generate_session(small_config(6));
  const auto& t = out.truth;
  const auto& s = out.session;
  EXPECT_EQ(t.seed, 6u);
  ASSERT_EQ(t.cluster_of.size(), s.participants.size());
  EXPECT_EQ(t.cluster_centers.size(), 3u);
  ASSERT_EQ(t.posts.size(), s.posts.size());
  ASSERT_EQ(t.final_designs.size(), s.final_designs.size());
  ASSERT_EQ(t.true_utility.size(), s.final_designs.size());
  for (std::size_t i = 0; i < s.posts.size(); ++i) {
    EXPECT_EQ(t.posts[i].id, s.posts[i].id);
    EXPECT_TRUE(in_unit_square(t.posts[i].location));
  }
  for (std::size_t i = 0; i < s.final_designs.size(); ++i) {
    EXPECT_EQ(t.final_designs[i].id, s.final_designs[i].id);
    EXPECT_TRUE(in_unit_square(t.final_designs[i].location));
    EXPECT_NEAR(t.true_utility[i], t.utility(t.final_designs[i].location), 1e-12);
    double mean = 0.0;
    for (const double x : s.final_designs[i].scores) mean += x;
    mean /= 3.0;
    EXPECT_NEAR(mean, std::clamp(t.true_utility[i], 1.0, 5.0), 0.5);
  }
  for (const auto& [g, series] : t.daily_counts) {
    ASSERT_EQ(series.size(), 4u);
    for (int day = 1; day <= 4; ++day) {
      std::size_t n = 0;
      for (const auto& p : s.posts) {
        if (p.day == day && s.group_of(p.participant_id) == g) ++n;
      }
      EXPECT_EQ(series[static_cast<std::size_t>(day - 1)], n);
    }
  }
}

TEST(Generate, FinalDesignsCoverTheSquare) {
  SynthConfig c;
  c.seed = 7;
  const auto out = generate_session(c);
  // Stratified locations: every quadrant holds a near-equal share.
  std::size_t quadrant[4] = {};
  for (const auto& r : out.truth.final_designs) {
    ++quadrant[(r.location.x >= 0.5 ? 1 : 0) + (r.location.y >= 0.5 ? 2 : 0)];
  }
  const double share = static_cast<double>(out.truth.final_designs.size()) / 4.0;
  for (const auto q : quadrant) EXPECT_NEAR(static_cast<double>(q), share, 0.15 * share);
}

TEST(GroundTruth, RoundTrips) {
  const auto t = generate_session(small_config(8)).truth;
  const auto text = serialize_ground_truth(t);
  const auto back = parse_ground_truth(text);
  EXPECT_EQ(serialize_ground_truth(back), text);
  EXPECT_EQ(back.cluster_of, t.cluster_of);
  EXPECT_EQ(back.daily_counts, t.daily_counts);
  EXPECT_THROW(parse_ground_truth("{}"), Error);
  EXPECT_THROW(parse_ground_truth("nope"), Error);
}

TEST(PlantedProfiles, OneHotByCluster) {
  const auto out = generate_session(small_config(9));
  const auto profiles = planted_profiles(out.session, out.truth);
  ASSERT_EQ(profiles.size(), 18u);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    EXPECT_EQ(profiles[i].participant_id, out.session.participants[i].id);
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      const double c = cosine(profiles[i].background_vector, profiles[j].background_vector);
      EXPECT_DOUBLE_EQ(c, out.truth.cluster_of[i] == out.truth.cluster_of[j] ? 1.0 : 0.0);
    }
  }
}

TEST(PlantedPeak, AffineImageIsRecovered) {
  const auto out = generate_session(small_config(10));
  const auto& t = out.truth;
  // Projection = rotation, scale and shift of latent space.
  auto map = [](Point2 z) { return Point2{2.0 * z.x - 1.0 * z.y + 3.0, 0.5 * z.x + 1.5 * z.y - 2.0}; };
  std::vector<ScoredDesign> designs;
  for (const auto& r : t.final_designs) {
    designs.push_back(make_scored_design(r.id, "", 1, map(r.location), {3.0}));
  }
  const auto p = project_planted_peak(t, designs);
  const auto expected = map(t.utility.peak);
  EXPECT_NEAR(p.x, expected.x, 1e-9);
  EXPECT_NEAR(p.y, expected.y, 1e-9);
}

TEST(PlantedPeak, NeedsThreeMatches) {
  const auto t = generate_session(small_config(11)).truth;
  std::vector<ScoredDesign> designs = {make_scored_design("unrelated", "", 1, {0, 0}, {3.0})};
  EXPECT_THROW(project_planted_peak(t, designs), Error);
}
