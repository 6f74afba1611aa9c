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

// Erdos-Renyi, Watts-Strogatz and Barabasi-Albert ensembles with a uniform
// transmission probability p = R0 / avg_degree.

#ifndef NETIMMUNE_GENERATE_HPP_
#define NETIMMUNE_GENERATE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"

namespace netimmune {

enum class GraphModel { kErdosRenyi, kWattsStrogatz, kBarabasiAlbert };

inline std::string_view model_name(GraphModel m) {
  switch (m) {
    case GraphModel::kErdosRenyi:
      return "er";
    case GraphModel::kWattsStrogatz:
      return "ws";
    case GraphModel::kBarabasiAlbert:
      return "ba";
  }
  return "?";
}

inline GraphModel parse_model(std::string_view name) {
  if (name == "er") return GraphModel::kErdosRenyi;
  if (name == "ws") return GraphModel::kWattsStrogatz;
  if (name == "ba") return GraphModel::kBarabasiAlbert;
  throw Error(ErrorKind::kConfig,
              "unknown graph model '" + std::string(name) + "' (er|ws|ba)");
}

struct GenConfig {
  GraphModel model = GraphModel::kErdosRenyi;
  std::size_t n = 5000;
  double avg_degree = 10.0;
  double rewire = 0.1;                  // Watts-Strogatz rewiring probability.
  std::optional<std::size_t> attach;    // Barabasi-Albert; avg_degree / 2 if unset.
  std::uint64_t rng_seed = 0;
  double r0 = 1.0;

  double edge_probability() const { return r0 / avg_degree; }

  void validate() const {
    if (n < 2) throw Error(ErrorKind::kConfig, "n must be at least 2");
    if (!(avg_degree > 0.0) || !(avg_degree < static_cast<double>(n))) {
      throw Error(ErrorKind::kConfig, "avg_degree must lie in (0, n)");
    }
    if (!(r0 >= 0.0)) throw Error(ErrorKind::kConfig, "R0 must be >= 0");
    if (!(rewire >= 0.0 && rewire <= 1.0)) {
      throw Error(ErrorKind::kInvalidProbability,
                  "rewiring probability must lie in [0,1]");
    }
    if (edge_probability() > 1.0) {
      throw Error(ErrorKind::kInvalidProbability,
                  "R0/avg_degree = " + std::to_string(edge_probability()) +
                      " exceeds 1");
    }
  }
};

using Edge = std::pair<NodeId, NodeId>;

namespace detail {

inline std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline std::vector<Edge> sorted_edges(
    const std::unordered_set<std::uint64_t>& keys) {
  std::vector<std::uint64_t> sorted(keys.begin(), keys.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Edge> edges;
  edges.reserve(sorted.size());
  for (std::uint64_t k : sorted) {
    edges.emplace_back(static_cast<NodeId>(k >> 32),
                       static_cast<NodeId>(k & 0xffffffffULL));
  }
  return edges;
}

// G(n, M) with M = round(n * avg_degree / 2).
inline std::vector<Edge> erdos_renyi(const GenConfig& c, Stream& rng) {
  const std::uint64_t n = c.n;
  const auto m = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(n) * c.avg_degree / 2.0));
  if (m > n * (n - 1) / 2) {
    throw Error(ErrorKind::kConfig, "avg_degree unachievable for ER graph");
  }
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(m * 2);
  while (keys.size() < m) {
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    if (u != v) keys.insert(edge_key(u, v));
  }
  return sorted_edges(keys);
}

// Ring lattice with avg_degree/2 neighbours per side, then each lattice edge
// (u, u+j) is rewired with probability `rewire` to a uniform non-neighbour.
inline std::vector<Edge> watts_strogatz(const GenConfig& c, Stream& rng) {
  const auto degree = static_cast<std::size_t>(std::llround(c.avg_degree));
  if (std::abs(c.avg_degree - static_cast<double>(degree)) > 1e-9 ||
      degree % 2 != 0 || degree < 2 || degree >= c.n) {
    throw Error(ErrorKind::kConfig,
                "Watts-Strogatz needs an even integer avg_degree in [2, n)");
  }
  const std::size_t n = c.n;
  const std::size_t half = degree / 2;
  std::vector<std::unordered_set<NodeId>> adj(n);
  auto link = [&](NodeId u, NodeId v) {
    adj[u].insert(v);
    adj[v].insert(u);
  };
  for (NodeId u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= half; ++j) {
      link(u, static_cast<NodeId>((u + j) % n));
    }
  }
  for (std::size_t j = 1; j <= half; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      if (!rng.coin(c.rewire)) continue;
      const auto v = static_cast<NodeId>((u + j) % n);
      if (!adj[u].contains(v) || adj[u].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(rng.below(n));
      } while (w == u || adj[u].contains(w));
      adj[u].erase(v);
      adj[v].erase(u);
      link(u, w);
    }
  }
  std::unordered_set<std::uint64_t> keys;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : adj[u]) {
      if (u < v) keys.insert(edge_key(u, v));
    }
  }
  return sorted_edges(keys);
}

// Starts from a clique on attach+1 nodes; each new node links to `attach`
// distinct existing nodes chosen proportionally to degree.
inline std::vector<Edge> barabasi_albert(const GenConfig& c, Stream& rng) {
  const std::size_t m =
      c.attach.value_or(static_cast<std::size_t>(std::llround(c.avg_degree / 2)));
  if (m < 1 || m + 1 > c.n) {
    throw Error(ErrorKind::kConfig,
                "Barabasi-Albert attach count must lie in [1, n-1]");
  }
  std::unordered_set<std::uint64_t> keys;
  std::vector<NodeId> endpoints;  // node repeated once per incident edge
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) {
      keys.insert(edge_key(u, v));
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  for (auto u = static_cast<NodeId>(m + 1); u < c.n; ++u) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (NodeId t : targets) {
      keys.insert(edge_key(u, t));
      endpoints.push_back(u);
      endpoints.push_back(t);
    }
  }
  return sorted_edges(keys);
}

}  // namespace detail

// Undirected edge list (u < v, ascending) of the configured ensemble. The
// topology depends only on (model, n, degree parameters, rng_seed), not R0.
inline std::vector<Edge> generate_topology(const GenConfig& config) {
  config.validate();
  Stream rng(derive_seed(config.rng_seed, 0x6e6e,
                         static_cast<std::uint64_t>(config.model)));
  switch (config.model) {
    case GraphModel::kErdosRenyi:
      return detail::erdos_renyi(config, rng);
    case GraphModel::kWattsStrogatz:
      return detail::watts_strogatz(config, rng);
    case GraphModel::kBarabasiAlbert:
      return detail::barabasi_albert(config, rng);
  }
  return {};
}

inline ProbGraph from_edges(std::size_t n, const std::vector<Edge>& edges,
                            double p) {
  GraphBuilder b(n, Directedness::kUndirected);
  for (const auto& [u, v] : edges) b.edge(u, v, p);
  return std::move(b).build();
}

inline ProbGraph generate(const GenConfig& config) {
  return from_edges(config.n, generate_topology(config),
                    config.edge_probability());
}

}  // namespace netimmune

#endif  // NETIMMUNE_GENERATE_HPP_
