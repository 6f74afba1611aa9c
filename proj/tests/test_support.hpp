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

// Random tiny instances shared by the oracle-backed tests.

#ifndef NETIMMUNE_TESTS_TEST_SUPPORT_HPP_
#define NETIMMUNE_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <set>
#include <utility>

#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"

namespace netimmune::testing {

struct TinySpec {
  std::size_t min_nodes = 6;
  std::size_t max_nodes = 8;
  std::size_t arcs = 12;
  // Probabilities are drawn from {p_lo, p_lo + 0.1, ..., p_hi}.
  double p_lo = 0.2;
  double p_hi = 0.8;
};

// Directed graph with node 0 as the only seed. The first arcs form a path
// out of the seed so most instances have something to save.
inline ProbGraph random_tiny_graph(std::uint64_t seed, const TinySpec& spec) {
  Stream rng(derive_seed(seed, 0x7e57));
  const std::size_t n =
      spec.min_nodes + rng.below(spec.max_nodes - spec.min_nodes + 1);
  const auto levels =
      static_cast<std::uint64_t>(std::llround((spec.p_hi - spec.p_lo) * 10)) + 1;
  auto draw_p = [&] { return spec.p_lo + 0.1 * static_cast<double>(rng.below(levels)); };
  GraphBuilder b(n);
  b.seed(0);
  std::set<std::pair<NodeId, NodeId>> used;
  std::size_t added = 0;
  for (NodeId u = 0; u + 1 < n && added < spec.arcs / 2; ++u, ++added) {
    used.insert({u, u + 1});
    b.arc(u, u + 1, draw_p());
  }
  while (added < spec.arcs) {
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    if (u == v || v == 0 || !used.insert({u, v}).second) continue;
    b.arc(u, v, draw_p());
    ++added;
  }
  return std::move(b).build();
}

}  // namespace netimmune::testing

#endif  // NETIMMUNE_TESTS_TEST_SUPPORT_HPP_
