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

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "netimmune/sweep.hpp"

namespace netimmune {
namespace {

SweepConfig SmallSweep() {
  SweepConfig cfg;
  cfg.models = {GraphModel::kWattsStrogatz, GraphModel::kErdosRenyi,
                GraphModel::kBarabasiAlbert};
  cfg.n = 400;
  cfg.avg_degrees = {10};
  cfg.r0_grid = parse_grid("0.5:2:0.5");
  cfg.ks = {5, 20};
  cfg.reps = 2;
  cfg.seed = 3;
  return cfg;
}

TEST(GridTest, Parse) {
  EXPECT_EQ(parse_grid("0.5:2.0:0.25").size(), 7u);
  EXPECT_EQ(parse_grid("0.5:2.0:0.25").back(), 2.0);
  EXPECT_EQ(parse_grid("1.5"), std::vector<double>{1.5});
  EXPECT_EQ(parse_grid("1:1:1"), std::vector<double>{1.0});
  EXPECT_THROW(parse_grid("1:2"), Error);
  EXPECT_THROW(parse_grid("2:1:0.5"), Error);
  EXPECT_THROW(parse_grid("1:2:0"), Error);
  EXPECT_THROW(parse_grid("a:2:1"), Error);
  EXPECT_THROW(parse_grid(""), Error);
}

TEST(SweepTest, RowCountAndOrder) {
  const SweepConfig cfg = SmallSweep();
  const auto rows = run_sweep(cfg);
  EXPECT_EQ(rows.size(), 3u * 1u * 4u * 2u * 2u);
  EXPECT_EQ(rows.front().model, GraphModel::kBarabasiAlbert);  // "ba" first
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(detail::sweep_key(rows[i - 1]), detail::sweep_key(rows[i]));
  }
}

TEST(SweepTest, FactorNonincreasingInR0) {
  const auto rows = run_sweep(SmallSweep());
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      if (a.model == b.model && a.k == b.k && a.rep == b.rep && a.r0 < b.r0) {
        EXPECT_GE(a.factor, b.factor);
      }
    }
  }
}

TEST(SweepTest, ThreadsAndReruns) {
  SweepConfig cfg = SmallSweep();
  std::ostringstream a, b;
  write_sweep_csv(run_sweep(cfg), a);
  cfg.threads = 4;
  write_sweep_csv(run_sweep(cfg), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(SweepTest, CsvLayout) {
  SweepConfig cfg;
  cfg.models = {GraphModel::kErdosRenyi};
  cfg.n = 100;
  cfg.avg_degrees = {4};
  cfg.r0_grid = {1.0};
  cfg.ks = {3};
  cfg.reps = 2;
  std::ostringstream out;
  write_sweep_csv(run_sweep(cfg), out);
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "model,n,avg_degree,R0,k,rep,factor,lambda_prime,n_s");
  EXPECT_EQ(lines[1].rfind("er,100,4,1,3,0,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("er,100,4,1,3,1,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("er,100,4,1,3,mean,", 0), 0u);
  EXPECT_EQ(lines[4].rfind("er,100,4,1,3,std,", 0), 0u);
}

TEST(SweepTest, SirAddsGammaColumnAndMatchesIcAtOne) {
  SweepConfig cfg;
  cfg.models = {GraphModel::kWattsStrogatz};
  cfg.n = 300;
  cfg.avg_degrees = {20};
  cfg.r0_grid = {1.5};
  cfg.ks = {10};
  cfg.reps = 1;
  const auto ic = run_sweep(cfg);
  cfg.gammas = {0.3, 0.5, 0.8, 1.0};
  const auto sir = run_sweep(cfg);
  ASSERT_EQ(sir.size(), 4u);
  for (std::size_t i = 1; i < sir.size(); ++i) {
    EXPECT_LT(sir[i - 1].factor, sir[i].factor);
  }
  EXPECT_EQ(sir.back().factor, ic.front().factor);
  std::ostringstream out;
  write_sweep_csv(sir, out);
  EXPECT_EQ(out.str().rfind("model,n,avg_degree,R0,k,rep,factor,lambda_prime,n_s,gamma\n", 0), 0u);
}

TEST(SweepTest, Validation) {
  SweepConfig cfg = SmallSweep();
  cfg.reps = 0;
  EXPECT_THROW(run_sweep(cfg), Error);
  cfg = SmallSweep();
  cfg.ks.clear();
  EXPECT_THROW(run_sweep(cfg), Error);
  cfg = SmallSweep();
  cfg.r0_grid = {20.0};
  EXPECT_THROW(run_sweep(cfg), Error);
}

}  // namespace
}  // namespace netimmune
