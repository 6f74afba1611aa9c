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

#include <cmath>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "netimmune/bounds.hpp"
#include "netimmune/generate.hpp"
#include "netimmune/transforms.hpp"

namespace netimmune {
namespace {

constexpr double kOneMinusInvE = 0.6321205588285577;

TEST(PhiTest, KnownValues) {
  EXPECT_EQ(phi(0.0), 1.0);
  EXPECT_NEAR(phi(1.0), 0.5819767068693265, 1e-15);
  EXPECT_NEAR(phi(1.0), 1.0 / (std::exp(1.0) - 1.0), 1e-15);
  EXPECT_EQ(phi(kInfinity), 0.0);
  EXPECT_THROW(phi(-0.1), Error);
  EXPECT_THROW(phi(std::nan("")), Error);
}

TEST(PhiTest, StrictlyDecreasingInUnitInterval) {
  double prev = phi(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double x = 0.05 * i;
    const double y = phi(x);
    EXPECT_LT(y, prev) << x;
    EXPECT_GT(y, 0.0);
    EXPECT_LE(y, 1.0);
    prev = y;
  }
  EXPECT_GT(phi(1e-300), 0.0);
  EXPECT_LE(phi(1e-300), 1.0);
}

TEST(EffectiveDegreeTest, IcValues) {
  EXPECT_EQ(effective_degree_ic(0.0, 10), 0.0);
  EXPECT_EQ(effective_degree_ic(0.5, 0), 0.0);
  EXPECT_NEAR(effective_degree_ic(0.1, 10), 0.6935087808430288, 1e-13);
  EXPECT_EQ(effective_degree_ic(1.0, 2), kInfinity);
  // Half-integer exponents are not rounded.
  EXPECT_NEAR(effective_degree_ic(0.75, 1), 1.0, 1e-15);
}

TEST(EffectiveDegreeTest, IcMonotone) {
  for (double p = 0.05; p < 0.95; p += 0.05) {
    for (double d = 1; d < 40; ++d) {
      EXPECT_LE(effective_degree_ic(p, d), effective_degree_ic(p + 0.05, d));
      EXPECT_LE(effective_degree_ic(p, d), effective_degree_ic(p, d + 1));
    }
  }
}

TEST(EffectiveDegreeTest, SirValues) {
  for (double p : {0.01, 0.1, 0.3}) {
    for (double d : {1.0, 5.0, 17.0}) {
      EXPECT_EQ(effective_degree_sir(p, d, 1.0), effective_degree_ic(p, d));
    }
  }
  EXPECT_NEAR(effective_degree_sir(0.1, 10, 0.5), 4.52547242789259, 1e-12);
  // (1 - gamma) B >= 1 diverges.
  EXPECT_EQ(effective_degree_sir(0.1, 10, 0.4), kInfinity);
  EXPECT_EQ(effective_degree_sir(1.0, 3, 0.5), kInfinity);
  EXPECT_THROW(effective_degree_sir(0.1, 10, 0.0), Error);
}

TEST(EffectiveDegreeTest, SirNonincreasingInGamma) {
  for (double p : {0.02, 0.05, 0.1}) {
    for (double d : {4.0, 10.0, 20.0}) {
      double prev = kInfinity;
      for (double gamma = 0.05; gamma <= 1.0 + 1e-12; gamma += 0.05) {
        const double l = effective_degree_sir(p, d, std::min(gamma, 1.0));
        EXPECT_LE(l, prev);
        prev = l;
      }
    }
  }
}

TEST(EffectiveDegreeTest, LinkValues) {
  EXPECT_EQ(effective_degree_link(0.0), 0.0);
  EXPECT_EQ(effective_degree_link(0.5), 1.0);
  EXPECT_NEAR(effective_degree_link(0.9), 9.0, 1e-12);
  EXPECT_EQ(effective_degree_link(1.0), kInfinity);
  EXPECT_NEAR(-std::expm1(-phi(effective_degree_link(0.5))), 0.4412072952372531,
              1e-15);
}

TEST(EffectiveDegreeTest, GraphStatistics) {
  // Node 1: in-arc 0.2 from 0, out-arcs 0.4 and 0.1, reciprocal pair with 2.
  const ProbGraph g = GraphBuilder(4)
                          .arc(0, 1, 0.2)
                          .arc(1, 2, 0.4)
                          .arc(2, 1, 0.3)
                          .arc(1, 3, 0.1)
                          .arc(3, 0, 0.9, /*structural=*/true)
                          .seed(0)
                          .build();
  const auto stats = degree_stats(g);
  EXPECT_EQ(stats[1].degree, 3u);
  EXPECT_EQ(stats[1].p_max, 0.4);
  EXPECT_EQ(stats[3].degree, 1u);
  EXPECT_EQ(stats[3].p_max, 0.1);
  EXPECT_EQ(effective_degree_ic(g, 1), effective_degree_ic(0.4, 3));
  const auto profile = effective_degree_profile(g);
  EXPECT_EQ(profile.nodes, (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(profile.max(), effective_degree_ic(0.4, 3));
  for (std::size_t i = 0; i < profile.nodes.size(); ++i) {
    EXPECT_GE(profile.lambda[i], 0.0);
  }
  const auto sorted = profile.sorted_descending();
  EXPECT_TRUE(std::is_sorted(sorted.rbegin(), sorted.rend()));
  const auto sir = effective_degree_profile(g, CascadeModel::sir(0.9));
  EXPECT_EQ(sir.model, DegreeModel::kSIR);
  EXPECT_EQ(sir.lambda[0], effective_degree_sir(0.4, 3, 0.9));
}

TEST(EffectiveDegreeTest, ZeroExactlyWhenNoRisk) {
  const ProbGraph g =
      GraphBuilder(4).arc(0, 1, 0.0).arc(1, 2, 0.3).seed(0).build();
  const auto profile = effective_degree_profile(g);
  EXPECT_EQ(profile.lambda[0], effective_degree_ic(0.3, 2));
  EXPECT_GT(profile.lambda[0], 0.0);
  EXPECT_EQ(profile.lambda[2], 0.0);  // node 3 isolated
}

TEST(EffectiveDegreeTest, LinkAndHouseholdProfiles) {
  const ProbGraph g = GraphBuilder(4, Directedness::kUndirected)
                          .edge(0, 1, 0.5)
                          .edge(1, 2, 0.2)
                          .edge(2, 3, 0.1)
                          .build();
  const LinkSplit split = split_for_link_immunization(g);
  const auto link = link_profile(split);
  EXPECT_EQ(link.model, DegreeModel::kLink);
  EXPECT_EQ(link.max(), 1.0);
  const std::vector<std::vector<NodeId>> households{{0, 1}, {2, 3}};
  const auto hh = household_profile(g, households);
  ASSERT_EQ(hh.lambda.size(), 2u);
  EXPECT_EQ(hh.lambda[0], household_lambda(0.2, 1));
  EXPECT_EQ(hh.lambda[1], household_lambda(0.2, 1));
}

TEST(ThresholdTest, UniformProfile) {
  const std::vector<double> l(20, 0.8);
  const BoundReport r = optimize_threshold(l, 5);
  EXPECT_EQ(r.n_s, 0u);
  EXPECT_EQ(r.lambda_prime, 0.8);
  EXPECT_DOUBLE_EQ(r.factor, -std::expm1(-phi(0.8)));
  EXPECT_EQ(r.table.size(), 5u);
}

TEST(ThresholdTest, SkewedExample) {
  const std::vector<double> l{0.7, 5.0, 0.7, 0.7};
  const BoundReport r = optimize_threshold(l, 2);
  ASSERT_EQ(r.table.size(), 2u);
  EXPECT_NEAR(r.table[0].factor, 0.03334949862547985, 1e-14);
  EXPECT_NEAR(r.table[1].factor, 0.29195799097817193, 1e-14);
  EXPECT_EQ(r.lambda_prime, 0.7);
  EXPECT_EQ(r.n_s, 1u);
  EXPECT_EQ(r.factor, r.table[1].factor);
  EXPECT_DOUBLE_EQ(r.bicriteria_budget, 1.5);
  EXPECT_DOUBLE_EQ(r.bicriteria_factor, -std::expm1(-phi(0.7)));
}

TEST(ThresholdTest, SmallLambdaApproachesLimit) {
  const std::vector<double> l(3, 1e-9);
  EXPECT_NEAR(optimize_threshold(l, 3).factor, kOneMinusInvE, 1e-8);
}

TEST(ThresholdTest, ArgmaxAndRange) {
  Stream rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> l(30);
    for (double& x : l) {
      x = rng.coin(0.05) ? kInfinity : 10.0 * rng.uniform() * rng.uniform();
    }
    const std::size_t k = 1 + rng.below(40);
    const BoundReport r = optimize_threshold(l, k);
    EXPECT_GE(r.factor, 0.0);
    EXPECT_LE(r.factor, kOneMinusInvE);
    for (const BoundRow& row : r.table) EXPECT_GE(r.factor, row.factor);
    EXPECT_EQ(r.table.size(), std::min<std::size_t>(k, 30));
  }
}

TEST(ThresholdTest, Errors) {
  EXPECT_THROW(optimize_threshold(std::vector<double>{}, 3), Error);
  EXPECT_THROW(optimize_threshold(std::vector<double>{1.0}, 0), Error);
}

TEST(ThresholdTest, CsvLayout) {
  const std::vector<double> l{0.7, 5.0, 0.7, 0.7};
  std::ostringstream out;
  write_bound_csv(optimize_threshold(l, 2), out);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("i,lambda_prime,n_s,factor\n1,5,0,", 0), 0u);
  EXPECT_NE(csv.find("\nbest,0.7,1,"), std::string::npos);
}

TEST(ClosedFormTest, FactorVersusR0) {
  EXPECT_NEAR(factor_vs_r0(10, 1, 1.0), 0.50, 0.005);
  EXPECT_NEAR(factor_vs_r0(10, 1, 2.0), 0.26, 0.005);
  EXPECT_NEAR(factor_vs_r0(10, 1, 1.0), 0.49993015824100967, 1e-12);
  EXPECT_NEAR(factor_vs_r0(10, 1, 2.0), 0.2610678628541313, 1e-12);
  EXPECT_NEAR(factor_vs_r0(10, 1, 1e-9), kOneMinusInvE, 1e-8);
  EXPECT_THROW(factor_vs_r0(10, 1, 10), Error);
  EXPECT_THROW(factor_vs_r0(10, 0.5, 1), Error);
}

TEST(ClosedFormTest, FactorDecreasesInR0AndSkew) {
  for (double d : {10.0, 20.0, 30.0}) {
    for (double s : {1.0, 2.0, 4.0}) {
      for (double r0 = 0.5; r0 < 2.0; r0 += 0.25) {
        EXPECT_GT(factor_vs_r0(d, s, r0), factor_vs_r0(d, s, r0 + 0.25));
        EXPECT_GT(factor_vs_r0(d, s, r0), factor_vs_r0(d, s + 1, r0));
      }
    }
  }
}

TEST(ClosedFormTest, MatchesThresholdOnRegularGraph) {
  // Ring lattice: every node has degree 10, so n_s = 0 and the factors agree.
  GenConfig c;
  c.model = GraphModel::kWattsStrogatz;
  c.n = 200;
  c.avg_degree = 10;
  c.rewire = 0.0;
  c.r0 = 1.5;
  const ProbGraph g = generate(c);
  const BoundReport r = optimize_threshold(effective_degree_profile(g), 20);
  EXPECT_EQ(r.n_s, 0u);
  EXPECT_NEAR(r.factor, factor_vs_r0(10, 1, 1.5), 1e-12);
}

TEST(ClosedFormTest, HouseholdLimits) {
  EXPECT_NEAR(household_factor(0.0, 2), 0.393, 0.002);
  EXPECT_NEAR(household_factor(0.0, 3), 0.283, 0.002);
  EXPECT_NEAR(household_factor(0.0, 4), 0.221, 0.002);
  EXPECT_NEAR(household_factor(0.0, 2), 0.3934693402873666, 1e-15);
  for (double lambda : {0.0, 0.3, 2.0}) {
    EXPECT_DOUBLE_EQ(household_factor(lambda, 1), -std::expm1(-phi(lambda)));
  }
  EXPECT_THROW(household_factor(0.1, 0.5), Error);
}

TEST(ClosedFormTest, RecommendedReplicates) {
  EXPECT_EQ(recommended_replicates(100, 3, 10, 5, 0.05), 1419u);
  const auto scale_free = recommended_replicates(100, 3, 10, 100, 0.05);
  EXPECT_EQ(scale_free,
            static_cast<std::size_t>(std::ceil(std::log(1200.0) / 2.0)));
  const double ratio =
      static_cast<double>(recommended_replicates(100, 3, 10, 1, 0.05)) /
      static_cast<double>(recommended_replicates(100, 3, 10, 2, 0.05));
  EXPECT_NEAR(ratio, 4.0, 0.01);
  EXPECT_THROW(recommended_replicates(100, 3, 10, 0, 0.05), Error);
  EXPECT_THROW(recommended_replicates(100, 3, 10, 1, 1.0), Error);
}

}  // namespace
}  // namespace netimmune
