// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "netimmune/generate.hpp"
#include "netimmune/immunize.hpp"
#include "netimmune/oracle.hpp"

namespace netimmune {
namespace {

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected netimmune::Error";
  return ErrorKind::kConfig;
}

ProbGraph SmallEr(std::uint64_t seed) {
  GenConfig c;
  c.n = 60;
  c.avg_degree = 4;
  c.r0 = 1.8;
  c.rng_seed = seed;
  return with_random_seeds(generate(c), 0.05, seed);
}

TEST(AcceptanceTest, DeterministicAcceptsAll) {
  const Group g{3, {4, 1, 7}, DeterministicPolicy{}};
  for (std::uint64_t l : {1u, 2u, 5u}) {
    EXPECT_EQ(sample_acceptance(g, l, 0, 0), (std::vector<NodeId>{1, 4, 7}));
  }
  EXPECT_THROW(sample_acceptance(g, 0, 0, 0), Error);
}

TEST(AcceptanceTest, IndependentUnionRate) {
  const Group g{0, {0, 1}, IndependentPolicy{{0.5, 0.5}}};
  const int draws = 100000;
  int hits = 0;
  for (int r = 0; r < draws; ++r) {
    const auto acc = sample_acceptance(g, 2, r, 21);
    hits += std::count(acc.begin(), acc.end(), NodeId{0});
  }
  EXPECT_NEAR(hits / static_cast<double>(draws), 0.75, 0.01);
}

TEST(AcceptanceTest, LeakyWithFullEscapeKeepsLayerZero) {
  const Group g{0, {10, 11, 12}, LeakyChainPolicy{1.0}};
  for (std::uint64_t r = 0; r < 100; ++r) {
    EXPECT_EQ(sample_acceptance(g, 1, r, 0), std::vector<NodeId>{10});
  }
}

TEST(AcceptanceTest, GroupValidation) {
  EXPECT_THROW((Group{0, {}, DeterministicPolicy{}}.validate(3)), Error);
  EXPECT_THROW((Group{0, {3}, DeterministicPolicy{}}.validate(3)), Error);
  EXPECT_THROW((Group{0, {1}, IndependentPolicy{{0.5, 0.5}}}.validate(3)),
               Error);
  EXPECT_EQ(KindOf([] { Group{0, {1}, IndependentPolicy{{1.5}}}.validate(3); }),
            ErrorKind::kInvalidProbability);
}

TEST(GreedyTest, CounterexampleBPicksNodeOne) {
  const ProbGraph g = counterexample_b(3);
  const Selection mc = greedy_nodes(g, 1, CascadeModel::ic(), {.replicates = 64});
  EXPECT_EQ(mc.chosen(), std::vector<GroupId>{1});
  EXPECT_EQ(mc.steps[0].gain.gain, 5.0);
  EXPECT_EQ(mc.value.mean, 5.0);
  const Selection exact = exact_greedy_nodes(g, 1);
  EXPECT_EQ(exact.chosen(), std::vector<GroupId>{1});
}

TEST(GreedyTest, CounterexampleAReachesFour) {
  const ProbGraph g = counterexample_a();
  const Selection s = greedy_nodes(g, 2, CascadeModel::ic(), {.replicates = 64});
  auto chosen = s.chosen();
  std::sort(chosen.begin(), chosen.end());
  EXPECT_EQ(chosen, (std::vector<GroupId>{1, 2}));
  EXPECT_EQ(s.value.mean, 4.0);
  EXPECT_EQ(exact_pi(g, std::vector<NodeId>{1, 2}).value, 4.0);
}

TEST(GreedyTest, TiesGoToSmallestId) {
  // Three identical leaves hanging off the seed.
  const ProbGraph g =
      GraphBuilder(4).arc(0, 1, 1).arc(0, 2, 1).arc(0, 3, 1).seed(0).build();
  const Selection s = greedy_nodes(g, 2, CascadeModel::ic(), {.replicates = 10});
  EXPECT_EQ(s.chosen(), (std::vector<GroupId>{1, 2}));
}

TEST(GreedyTest, IdenticalGroupsAreIdempotent) {
  const ProbGraph g = counterexample_b(3);
  std::vector<Group> groups;
  for (GroupId id = 0; id < 4; ++id) groups.push_back({id, {2}, DeterministicPolicy{}});
  const Selection s =
      greedy(g, groups, 3, CascadeModel::ic(), {.replicates = 32}, false);
  EXPECT_EQ(s.value.mean, 4.0);
  EXPECT_EQ(s.steps[0].gain.gain, 4.0);
  EXPECT_EQ(s.steps[1].gain.gain, 0.0);
  EXPECT_EQ(s.chosen(), (std::vector<GroupId>{0, 1, 2}));
}

TEST(GreedyTest, BudgetErrors) {
  const ProbGraph g = counterexample_b(2);
  const auto groups = singleton_groups(g.non_seed_nodes());
  EXPECT_EQ(KindOf([&] {
              greedy(g, groups, groups.size() + 1, CascadeModel::ic(),
                     {.replicates = 8}, false);
            }),
            ErrorKind::kBudget);
  EXPECT_EQ(KindOf([&] {
              greedy(g, groups, 0, CascadeModel::ic(), {.replicates = 8}, false);
            }),
            ErrorKind::kBudget);
  EXPECT_NO_THROW(greedy(g, groups, groups.size() + 1, CascadeModel::ic(),
                         {.replicates = 8}, true));
}

TEST(GreedyTest, MultisetRepeatsUncertainGroup) {
  // Only node 1 matters and it accepts with probability 0.5 per dose.
  const ProbGraph g = GraphBuilder(4).arc(0, 1, 1).arc(1, 2, 1).arc(1, 3, 1).seed(0).build();
  const std::vector<Group> groups{{0, {1}, IndependentPolicy{{0.5}}},
                                  {1, {3}, DeterministicPolicy{}}};
  const Selection s = greedy(g, groups, 3, CascadeModel::ic(),
                             {.replicates = 4000, .master_seed = 5}, true);
  ASSERT_EQ(s.steps.size(), 3u);
  EXPECT_EQ(s.steps[0].group, 0u);
  EXPECT_EQ(s.steps[1].group, 0u);
  EXPECT_EQ(s.steps[1].multiplicity, 2u);
  std::uint64_t total = 0;
  for (const auto& [id, l] : s.multiplicities) total += l;
  EXPECT_EQ(total, 3u);
  EXPECT_NEAR(s.steps[0].gain.gain, 1.5, 4 * s.steps[0].gain.std_error);
  EXPECT_NEAR(s.steps[1].gain.gain, 0.75, 4 * s.steps[1].gain.std_error);
}

TEST(GreedyTest, Deterministic) {
  const ProbGraph g = SmallEr(3);
  const EstimatorConfig cfg{.replicates = 300, .master_seed = 9};
  const Selection a = greedy_nodes(g, 4, CascadeModel::ic(), cfg);
  const Selection b = greedy_nodes(g, 4, CascadeModel::ic(), cfg);
  EXPECT_EQ(a.chosen(), b.chosen());
  EXPECT_EQ(a.value.mean, b.value.mean);
  EstimatorConfig threaded = cfg;
  threaded.threads = 4;
  const Selection c = greedy_nodes(g, 4, CascadeModel::ic(), threaded);
  EXPECT_EQ(a.chosen(), c.chosen());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.steps[i].gain.gain, c.steps[i].gain.gain);
  }
}

// Reported gains equal estimate_pi differences recomputed with the same
// iteration seed.
TEST(GreedyTest, GainsMatchPostHocDifferences) {
  for (std::uint64_t seed : {1u, 2u}) {
    const ProbGraph g = SmallEr(seed);
    const auto nodes = g.non_seed_nodes();
    std::vector<Group> groups = singleton_groups(nodes);
    groups[0].members.push_back(nodes[1]);
    groups[2].policy = IndependentPolicy{{0.6}};
    const EstimatorConfig cfg{.replicates = 400, .master_seed = seed};
    const Selection s = greedy(g, groups, 3, CascadeModel::sir(0.7), cfg, true);
    Multiplicities before;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
      Multiplicities after = before;
      ++after[s.steps[i].group];
      EstimatorConfig it = cfg;
      it.master_seed = iteration_seed(cfg.master_seed, i);
      const double diff =
          estimate_pi(g, CascadeModel::sir(0.7), groups, after, it).mean -
          estimate_pi(g, CascadeModel::sir(0.7), groups, before, it).mean;
      EXPECT_NEAR(s.steps[i].gain.gain, diff, 1e-9) << "step " << i;
      before = after;
    }
  }
}

TEST(GreedyTest, DefaultReplicatesFromHoeffding) {
  const ProbGraph g = counterexample_b(3);
  EXPECT_EQ(default_replicates(g, 2, 5),
            recommended_replicates(6.0, 2, 5, 0.02 * 6.0, 0.05));
  const Selection s = greedy_nodes(g, 1, CascadeModel::ic(), {.replicates = 0});
  EXPECT_EQ(s.value.replicates, default_replicates(g, 1, 5));
}

ProbGraph Star() {
  // Hub 1 has 12 neighbours at p = 0.6 (lambda about 243); every other
  // non-seed node stays below lambda = 1.
  GraphBuilder b(17);
  b.seed(0).arc(0, 1, 0.6);
  for (NodeId leaf = 2; leaf < 13; ++leaf) b.arc(1, leaf, 0.6);
  b.arc(0, 13, 0.4).arc(13, 14, 0.4).arc(0, 15, 0.4).arc(15, 16, 0.4);
  return std::move(b).build();
}

TEST(PrefixTest, HubForcedFirst) {
  const ProbGraph g = Star();
  const auto high = high_degree_nodes(g, CascadeModel::ic(), 1.0);
  ASSERT_EQ(high.size(), 1u);
  EXPECT_EQ(high[0], 1u);
  const Selection s =
      prefix_greedy(g, 3, 1.0, CascadeModel::ic(), {.replicates = 500});
  ASSERT_EQ(s.steps.size(), 3u);
  EXPECT_EQ(s.steps[0].group, 1u);
  EXPECT_TRUE(s.steps[0].forced);
  EXPECT_FALSE(s.steps[1].forced);
  EXPECT_EQ(s.forced_prefix, 1u);
}

TEST(PrefixTest, HighThresholdEqualsPlainGreedy) {
  const ProbGraph g = SmallEr(4);
  const double top = effective_degree_profile(g).max();
  const EstimatorConfig cfg{.replicates = 200, .master_seed = 2};
  const Selection a = prefix_greedy(g, 3, top, CascadeModel::ic(), cfg);
  const Selection b = greedy_nodes(g, 3, CascadeModel::ic(), cfg);
  EXPECT_EQ(a.chosen(), b.chosen());
  EXPECT_EQ(a.value.mean, b.value.mean);
  EXPECT_EQ(a.forced_prefix, 0u);
}

TEST(PrefixTest, ThresholdErrorNamesCount) {
  const ProbGraph g = Star();
  try {
    prefix_greedy(g, 1, 1.0, CascadeModel::ic(), {.replicates = 8});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kThreshold);
    EXPECT_NE(std::string(e.what()).find("n_s = 1"), std::string::npos);
  }
}

TEST(PrefixTest, BicriteriaSpendsExtraBudget) {
  // Two hubs above the threshold, k = 4: 6 selections, multiplier 1.5.
  GraphBuilder b(30);
  b.seed(0).arc(0, 1, 0.6).arc(0, 2, 0.6);
  NodeId leaf = 3;
  for (NodeId hub : {1u, 2u}) {
    for (int i = 0; i < 10; ++i) b.arc(hub, leaf++, 0.6);
  }
  for (; leaf + 1 < 30; leaf += 2) b.arc(0, leaf, 0.3).arc(leaf, leaf + 1, 0.3);
  const ProbGraph g = std::move(b).build();
  const auto high = high_degree_nodes(g, CascadeModel::ic(), 1.0);
  ASSERT_EQ(high.size(), 2u);
  const Selection s = prefix_greedy(g, 4, 1.0, CascadeModel::ic(),
                                    {.replicates = 200}, PrefixMode::kBicriteria);
  EXPECT_EQ(s.steps.size(), 6u);
  EXPECT_EQ(s.forced_prefix, 2u);
  EXPECT_DOUBLE_EQ(1.0 + static_cast<double>(s.forced_prefix) / 4.0, 1.5);
}

}  // namespace
}  // namespace netimmune
