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

// Directed probabilistic graph with per-node utilities and a seed set.

#ifndef NETIMMUNE_GRAPH_HPP_
#define NETIMMUNE_GRAPH_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "netimmune/core.hpp"

namespace netimmune {

struct Arc {
  NodeId src = 0;
  NodeId dst = 0;
  double p = 0.0;
  // Structural arcs (collector links in layered graphs) never count toward
  // the degree or probability statistics of immunization candidates.
  bool structural = false;

  friend bool operator==(const Arc&, const Arc&) = default;
};

enum class Directedness { kDirected, kUndirected };

// Immutable after construction. Arcs are kept sorted by (src, dst) so the
// out-arcs of a node form one contiguous range. An undirected graph stores
// each edge as two arcs with independent coins.
class ProbGraph {
 public:
  ProbGraph() : out_offset_(1, 0) {}

  ProbGraph(std::size_t n, std::vector<Arc> arcs, std::vector<double> utility,
            std::vector<NodeId> seeds,
            Directedness directedness = Directedness::kDirected)
      : n_(n),
        arcs_(std::move(arcs)),
        utility_(std::move(utility)),
        seeds_(std::move(seeds)),
        directedness_(directedness) {
    if (utility_.empty()) utility_.assign(n_, 1.0);
    Validate();
  }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_arcs() const noexcept { return arcs_.size(); }
  bool directed() const noexcept {
    return directedness_ == Directedness::kDirected;
  }
  Directedness directedness() const noexcept { return directedness_; }

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc& arc(std::size_t i) const noexcept { return arcs_[i]; }

  // Arc indices [first, last) leaving u.
  std::pair<std::size_t, std::size_t> out_range(NodeId u) const noexcept {
    return {out_offset_[u], out_offset_[u + 1]};
  }
  std::span<const Arc> out_arcs(NodeId u) const noexcept {
    return std::span<const Arc>(arcs_).subspan(
        out_offset_[u], out_offset_[u + 1] - out_offset_[u]);
  }

  double utility(NodeId u) const noexcept { return utility_[u]; }
  std::span<const double> utilities() const noexcept { return utility_; }
  double total_utility() const noexcept {
    double total = 0.0;
    for (double a : utility_) total += a;
    return total;
  }

  std::span<const NodeId> seeds() const noexcept { return seeds_; }
  bool is_seed(NodeId u) const noexcept { return seed_mask_[u] != 0; }

  // Nodes that may be immunized: every node outside the seed set.
  std::vector<NodeId> non_seed_nodes() const {
    std::vector<NodeId> out;
    out.reserve(n_ - seeds_.size());
    for (NodeId u = 0; u < n_; ++u) {
      if (!is_seed(u)) out.push_back(u);
    }
    return out;
  }

  // Index of arc (src, dst), or num_arcs() when absent.
  std::size_t find_arc(NodeId src, NodeId dst) const noexcept {
    auto [first, last] = out_range(src);
    auto it = std::lower_bound(
        arcs_.begin() + first, arcs_.begin() + last, dst,
        [](const Arc& a, NodeId v) { return a.dst < v; });
    if (it != arcs_.begin() + last && it->dst == dst) {
      return static_cast<std::size_t>(it - arcs_.begin());
    }
    return arcs_.size();
  }

  friend bool operator==(const ProbGraph& a, const ProbGraph& b) {
    return a.n_ == b.n_ && a.directedness_ == b.directedness_ &&
           a.arcs_ == b.arcs_ && a.utility_ == b.utility_ &&
           a.seeds_ == b.seeds_;
  }

 private:
  void Validate() {
    if (utility_.size() != n_) {
      throw Error(ErrorKind::kConfig, "utility vector has " +
                                          std::to_string(utility_.size()) +
                                          " entries for " + std::to_string(n_) +
                                          " nodes");
    }
    for (NodeId u = 0; u < n_; ++u) {
      if (!std::isfinite(utility_[u]) || utility_[u] < 0.0) {
        throw Error(ErrorKind::kConfig,
                    "utility of node " + std::to_string(u) +
                        " must be finite and nonnegative");
      }
    }
    for (const Arc& a : arcs_) {
      if (a.src >= n_ || a.dst >= n_) {
        throw Error(ErrorKind::kConfig,
                    "arc (" + std::to_string(a.src) + "," +
                        std::to_string(a.dst) + ") references a node >= " +
                        std::to_string(n_));
      }
      if (a.src == a.dst) {
        throw Error(ErrorKind::kConfig,
                    "self-loop on node " + std::to_string(a.src));
      }
      if (!(a.p >= 0.0 && a.p <= 1.0)) {
        throw Error(ErrorKind::kInvalidProbability,
                    "arc (" + std::to_string(a.src) + "," +
                        std::to_string(a.dst) + ") has probability " +
                        std::to_string(a.p) + " outside [0,1]");
      }
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) {
      return std::tie(x.src, x.dst) < std::tie(y.src, y.dst);
    });
    for (std::size_t i = 1; i < arcs_.size(); ++i) {
      if (arcs_[i].src == arcs_[i - 1].src &&
          arcs_[i].dst == arcs_[i - 1].dst) {
        throw Error(ErrorKind::kConfig,
                    "duplicate arc (" + std::to_string(arcs_[i].src) + "," +
                        std::to_string(arcs_[i].dst) + ")");
      }
    }
    out_offset_.assign(n_ + 1, 0);
    for (const Arc& a : arcs_) ++out_offset_[a.src + 1];
    for (std::size_t u = 0; u < n_; ++u) out_offset_[u + 1] += out_offset_[u];

    std::sort(seeds_.begin(), seeds_.end());
    seeds_.erase(std::unique(seeds_.begin(), seeds_.end()), seeds_.end());
    seed_mask_.assign(n_, 0);
    for (NodeId s : seeds_) {
      if (s >= n_) {
        throw Error(ErrorKind::kConfig,
                    "seed " + std::to_string(s) + " is not a node");
      }
      seed_mask_[s] = 1;
    }
    if (!directed()) {
      for (const Arc& a : arcs_) {
        const std::size_t back = find_arc(a.dst, a.src);
        if (back == arcs_.size() || arcs_[back].p != a.p) {
          throw Error(ErrorKind::kConfig,
                      "undirected graph is missing the reverse of arc (" +
                          std::to_string(a.src) + "," + std::to_string(a.dst) +
                          ")");
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<double> utility_;
  std::vector<NodeId> seeds_;
  std::vector<char> seed_mask_;
  std::vector<std::size_t> out_offset_;
  Directedness directedness_ = Directedness::kDirected;
};

// Accumulates nodes, arcs and seeds; build() validates everything at once.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n,
                        Directedness directedness = Directedness::kDirected)
      : n_(n), utility_(n, 1.0), directedness_(directedness) {}

  GraphBuilder& arc(NodeId u, NodeId v, double p, bool structural = false) {
    arcs_.push_back({u, v, p, structural});
    return *this;
  }
  // Both directions, independent coins.
  GraphBuilder& edge(NodeId u, NodeId v, double p) {
    arcs_.push_back({u, v, p, false});
    arcs_.push_back({v, u, p, false});
    return *this;
  }
  GraphBuilder& utility(NodeId u, double a) {
    if (u >= n_) {
      throw Error(ErrorKind::kConfig,
                  "utility for node " + std::to_string(u) + " out of range");
    }
    utility_[u] = a;
    return *this;
  }
  GraphBuilder& seed(NodeId u) {
    seeds_.push_back(u);
    return *this;
  }

  ProbGraph build() && {
    return ProbGraph(n_, std::move(arcs_), std::move(utility_),
                     std::move(seeds_), directedness_);
  }
  ProbGraph build() const& {
    return ProbGraph(n_, arcs_, utility_, seeds_, directedness_);
  }

 private:
  std::size_t n_;
  std::vector<Arc> arcs_;
  std::vector<double> utility_;
  std::vector<NodeId> seeds_;
  Directedness directedness_;
};

// Mean over nodes of the summed out-arc probabilities: R0 of an IC graph.
inline double mean_expected_degree(const ProbGraph& g) {
  if (g.num_nodes() == 0) return 0.0;
  double total = 0.0;
  for (const Arc& a : g.arcs()) {
    if (!a.structural) total += a.p;
  }
  return total / static_cast<double>(g.num_nodes());
}

// Copy of g with its seed set replaced.
inline ProbGraph with_seeds(const ProbGraph& g, std::vector<NodeId> seeds) {
  return ProbGraph(g.num_nodes(), {g.arcs().begin(), g.arcs().end()},
                   {g.utilities().begin(), g.utilities().end()},
                   std::move(seeds), g.directedness());
}

// Copy of g with a uniformly random seed set of round(fraction * n) nodes,
// at least one.
inline ProbGraph with_random_seeds(const ProbGraph& g, double fraction,
                                   std::uint64_t rng_seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::kConfig, "seed fraction must lie in (0, 1]");
  }
  const std::size_t n = g.num_nodes();
  std::size_t count = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, n == 0 ? 0 : 1, n);
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;
  Stream rng(derive_seed(rng_seed, 0x5eed));
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
  }
  order.resize(count);
  return with_seeds(g, std::move(order));
}

}  // namespace netimmune

#endif  // NETIMMUNE_GRAPH_HPP_
