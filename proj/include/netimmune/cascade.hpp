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

// Live-edge sampling for the independent cascade (IC) model and its SIR
// emulation, reachability under node removal, and Monte Carlo estimators for
// the spread sigma(I) and the saved utility pi(S).
//
// Replicate r of an estimate with master seed s draws from streams keyed by
// (s, r), so results do not depend on the order or parallelism in which
// replicates run; partial sums are merged in ascending replicate order.

#ifndef NETIMMUNE_CASCADE_HPP_
#define NETIMMUNE_CASCADE_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/groups.hpp"

namespace netimmune {

enum class CascadeKind { kIC, kSIR };

// In SIR mode an arc's probability is the per-step transmission probability
// beta and a node stays infectious for a geometric(gamma) number of steps.
struct CascadeModel {
  CascadeKind kind = CascadeKind::kIC;
  double gamma = 1.0;
  std::vector<double> node_gamma;  // optional per-node override

  static CascadeModel ic() { return {}; }
  static CascadeModel sir(double gamma) {
    return {CascadeKind::kSIR, gamma, {}};
  }

  bool is_sir() const noexcept { return kind == CascadeKind::kSIR; }
  double gamma_of(NodeId u) const noexcept {
    return node_gamma.empty() ? gamma : node_gamma[u];
  }

  void validate(const ProbGraph& g) const {
    if (!is_sir()) return;
    if (!node_gamma.empty() && node_gamma.size() != g.num_nodes()) {
      throw Error(ErrorKind::kConfig, "need one recovery rate per node");
    }
    auto check = [](double x) {
      if (!(x > 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::kInvalidProbability,
                    "recovery probability must lie in (0,1]");
      }
    };
    if (node_gamma.empty()) check(gamma);
    for (double x : node_gamma) check(x);
  }
};

// One realized cascade instance. live[i] tells whether arc i transmits; in
// SIR mode attempts[u] is the number of infectious steps of u and arc i is
// live iff one of its source's attempts succeeded.
struct LiveEdgeSample {
  std::vector<std::uint8_t> live;
  std::vector<std::uint32_t> attempts;
  std::uint64_t replicate_index = 0;
  std::uint64_t stream_key = 0;
};

inline constexpr std::uint64_t kLiveEdgeStream = 0x11fe;
inline constexpr std::uint64_t kAttemptStream = 0xa77e;
inline constexpr std::uint64_t kDirectSirStream = 0xd5a1;

// Geometric on {1, 2, ...} with success probability gamma; gamma = 1 draws
// nothing so SIR(1) consumes exactly the IC coin sequence.
inline std::uint32_t sample_attempts(double gamma, Stream& rng) {
  std::uint32_t tau = 1;
  if (gamma >= 1.0) return tau;
  while (!rng.coin(gamma)) ++tau;
  return tau;
}

inline void sample_live_edges_into(const ProbGraph& g,
                                   const CascadeModel& model,
                                   std::uint64_t replicate_index,
                                   std::uint64_t master_seed,
                                   LiveEdgeSample& out) {
  out.replicate_index = replicate_index;
  out.stream_key = derive_seed(master_seed, replicate_index, kLiveEdgeStream);
  out.live.resize(g.num_arcs());
  Stream coins(out.stream_key);
  if (!model.is_sir()) {
    out.attempts.clear();
    for (std::size_t i = 0; i < g.num_arcs(); ++i) {
      out.live[i] = coins.coin(g.arc(i).p);
    }
    return;
  }
  Stream durations(derive_seed(master_seed, replicate_index, kAttemptStream));
  out.attempts.resize(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    out.attempts[u] = sample_attempts(model.gamma_of(u), durations);
  }
  for (std::size_t i = 0; i < g.num_arcs(); ++i) {
    const Arc& a = g.arc(i);
    std::uint8_t live = 0;
    for (std::uint32_t k = 0; k < out.attempts[a.src] && !live; ++k) {
      live = coins.coin(a.p);
    }
    out.live[i] = live;
  }
}

inline LiveEdgeSample sample_live_edges(const ProbGraph& g,
                                        const CascadeModel& model,
                                        std::uint64_t replicate_index,
                                        std::uint64_t master_seed) {
  model.validate(g);
  LiveEdgeSample s;
  sample_live_edges_into(g, model, replicate_index, master_seed, s);
  return s;
}

// Reusable BFS scratch space. After run(), contains(u) tells whether u was
// reached; visited() lists the reached nodes in discovery order.
class ReachSearch {
 public:
  explicit ReachSearch(const ProbGraph& g)
      : g_(g), stamp_(g.num_nodes(), 0) {}

  // removed is a per-node mask, or empty for no removals.
  std::span<const NodeId> run(const LiveEdgeSample& sample,
                              std::span<const std::uint8_t> removed) {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    visited_.clear();
    auto blocked = [&](NodeId u) { return !removed.empty() && removed[u]; };
    for (NodeId s : g_.seeds()) {
      if (blocked(s) || stamp_[s] == epoch_) continue;
      stamp_[s] = epoch_;
      visited_.push_back(s);
    }
    for (std::size_t head = 0; head < visited_.size(); ++head) {
      const NodeId u = visited_[head];
      auto [first, last] = g_.out_range(u);
      for (std::size_t i = first; i < last; ++i) {
        if (!sample.live[i]) continue;
        const NodeId v = g_.arc(i).dst;
        if (stamp_[v] == epoch_ || blocked(v)) continue;
        stamp_[v] = epoch_;
        visited_.push_back(v);
      }
    }
    return visited_;
  }

  bool contains(NodeId u) const noexcept { return stamp_[u] == epoch_; }
  std::span<const NodeId> visited() const noexcept { return visited_; }

 private:
  const ProbGraph& g_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> visited_;
};

inline std::vector<std::uint8_t> node_mask(std::size_t n,
                                           std::span<const NodeId> nodes) {
  std::vector<std::uint8_t> mask(n, 0);
  for (NodeId u : nodes) {
    if (u >= n) {
      throw Error(ErrorKind::kConfig,
                  "node " + std::to_string(u) + " is not in the graph");
    }
    mask[u] = 1;
  }
  return mask;
}

// Nodes reachable from the non-removed seeds over live arcs that avoid the
// removed nodes, ascending.
inline std::vector<NodeId> reachable(const LiveEdgeSample& sample,
                                     const ProbGraph& g,
                                     std::span<const NodeId> removed) {
  ReachSearch search(g);
  const auto mask = node_mask(g.num_nodes(), removed);
  auto visited = search.run(sample, mask);
  std::vector<NodeId> out(visited.begin(), visited.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// Utility of nodes infected without removals but not with them. Removed nodes
// that would have been infected count as saved.
inline double saved_between(const ProbGraph& g, ReachSearch& base,
                            ReachSearch& with_removed) {
  double saved = 0.0;
  for (NodeId u : base.visited()) {
    if (!with_removed.contains(u)) saved += g.utility(u);
  }
  return saved;
}

}  // namespace detail

inline double saved_utility(const LiveEdgeSample& sample, const ProbGraph& g,
                            std::span<const NodeId> removed) {
  ReachSearch base(g), cut(g);
  base.run(sample, {});
  cut.run(sample, node_mask(g.num_nodes(), removed));
  return detail::saved_between(g, base, cut);
}

// ---------------------------------------------------------------------------
// Monte Carlo estimation.

struct EstimatorConfig {
  std::size_t replicates = 10000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
};

struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
};

inline constexpr std::size_t kReplicateChunk = 64;

// Per-replicate scratch handed to estimator kernels.
struct ReplicateContext {
  explicit ReplicateContext(const ProbGraph& g)
      : base(g), cut(g), removed(g.num_nodes(), 0) {}

  LiveEdgeSample sample;
  ReachSearch base;
  ReachSearch cut;
  std::vector<std::uint8_t> removed;
};

// Averages kernel(replicate_index, ctx) over cfg.replicates replicates.
// ctx.sample already holds the replicate's live-edge sample.
template <typename Kernel>
EstimateResult estimate_with(const ProbGraph& g, const CascadeModel& model,
                             const EstimatorConfig& cfg, Kernel&& kernel) {
  if (cfg.replicates == 0) {
    throw Error(ErrorKind::kConfig, "replicate count must be at least 1");
  }
  model.validate(g);
  const std::size_t chunks =
      (cfg.replicates + kReplicateChunk - 1) / kReplicateChunk;
  std::vector<Moments> partial(chunks);
  for_each_chunk(cfg.replicates, kReplicateChunk, cfg.threads,
                 [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                   ReplicateContext ctx(g);
                   Moments m;
                   for (std::size_t r = begin; r < end; ++r) {
                     sample_live_edges_into(g, model, r, cfg.master_seed,
                                            ctx.sample);
                     m.add(kernel(r, ctx));
                   }
                   partial[chunk] = m;
                 });
  Moments total;
  for (const Moments& m : partial) total.merge(m);
  return {total.mean(), total.stderr_of_mean(), cfg.replicates,
          cfg.master_seed};
}

// Expected utility of infected nodes, sigma(I).
inline EstimateResult estimate_sigma(const ProbGraph& g,
                                     const CascadeModel& model,
                                     const EstimatorConfig& cfg) {
  return estimate_with(g, model, cfg,
                       [&](std::size_t, ReplicateContext& ctx) {
                         double total = 0.0;
                         for (NodeId u : ctx.base.run(ctx.sample, {})) {
                           total += g.utility(u);
                         }
                         return total;
                       });
}

// Expected saved utility pi(S) for a fixed removed node set.
inline EstimateResult estimate_pi(const ProbGraph& g, const CascadeModel& model,
                                  std::span<const NodeId> removed,
                                  const EstimatorConfig& cfg) {
  const auto mask = node_mask(g.num_nodes(), removed);
  return estimate_with(g, model, cfg,
                       [&](std::size_t, ReplicateContext& ctx) {
                         ctx.base.run(ctx.sample, {});
                         ctx.cut.run(ctx.sample, mask);
                         return detail::saved_between(g, ctx.base, ctx.cut);
                       });
}

// Group multiplicities of a (multi)set selection.
using Multiplicities = std::map<GroupId, std::uint64_t>;

inline std::map<GroupId, const Group*> index_groups(
    std::span<const Group> groups, std::size_t num_nodes) {
  std::map<GroupId, const Group*> by_id;
  for (const Group& grp : groups) {
    grp.validate(num_nodes);
    if (!by_id.emplace(grp.id, &grp).second) {
      throw Error(ErrorKind::kConfig,
                  "duplicate group id " + std::to_string(grp.id));
    }
  }
  return by_id;
}

// Marks the accepted members of every chosen group in replicate r.
inline void realize_selection(const std::map<GroupId, const Group*>& by_id,
                              const Multiplicities& chosen, std::uint64_t r,
                              std::uint64_t master_seed,
                              std::vector<std::uint8_t>& removed) {
  for (const auto& [id, l] : chosen) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::kConfig, "unknown group id " + std::to_string(id));
    }
    for (std::uint64_t instance = 1; instance <= l; ++instance) {
      realize_instance(*it->second, instance, r, master_seed,
                       [&](NodeId u) { removed[u] = 1; });
    }
  }
}

// Expected saved utility of a group selection: each replicate first realizes
// vaccine acceptance for every chosen group instance, then removes the
// accepted nodes.
inline EstimateResult estimate_pi(const ProbGraph& g, const CascadeModel& model,
                                  std::span<const Group> groups,
                                  const Multiplicities& chosen,
                                  const EstimatorConfig& cfg) {
  const auto by_id = index_groups(groups, g.num_nodes());
  return estimate_with(
      g, model, cfg, [&](std::size_t r, ReplicateContext& ctx) {
        std::fill(ctx.removed.begin(), ctx.removed.end(), 0);
        realize_selection(by_id, chosen, r, cfg.master_seed, ctx.removed);
        ctx.base.run(ctx.sample, {});
        ctx.cut.run(ctx.sample, ctx.removed);
        return detail::saved_between(g, ctx.base, ctx.cut);
      });
}

// Per-node infection probability from live-edge sampling.
inline std::vector<EstimateResult> estimate_infection_probabilities(
    const ProbGraph& g, const CascadeModel& model, const EstimatorConfig& cfg) {
  if (cfg.replicates == 0) {
    throw Error(ErrorKind::kConfig, "replicate count must be at least 1");
  }
  model.validate(g);
  const std::size_t n = g.num_nodes();
  const std::size_t chunks =
      (cfg.replicates + kReplicateChunk - 1) / kReplicateChunk;
  std::vector<std::vector<Moments>> partial(chunks);
  for_each_chunk(cfg.replicates, kReplicateChunk, cfg.threads,
                 [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                   ReplicateContext ctx(g);
                   std::vector<Moments> m(n);
                   for (std::size_t r = begin; r < end; ++r) {
                     sample_live_edges_into(g, model, r, cfg.master_seed,
                                            ctx.sample);
                     ctx.base.run(ctx.sample, {});
                     for (NodeId u = 0; u < n; ++u) {
                       m[u].add(ctx.base.contains(u) ? 1.0 : 0.0);
                     }
                   }
                   partial[chunk] = std::move(m);
                 });
  std::vector<EstimateResult> out(n);
  for (NodeId u = 0; u < n; ++u) {
    Moments total;
    for (const auto& m : partial) total.merge(m[u]);
    out[u] = {total.mean(), total.stderr_of_mean(), cfg.replicates,
              cfg.master_seed};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct discrete-time SIR simulation, used to validate the live-edge
// emulation. Each step every infectious node tries each susceptible
// out-neighbour with the arc probability, then recovers with probability
// gamma_u. Returns the per-node mask of nodes ever infected.
inline std::vector<std::uint8_t> simulate_sir(const ProbGraph& g,
                                              const CascadeModel& model,
                                              std::uint64_t replicate_index,
                                              std::uint64_t master_seed) {
  Stream rng(derive_seed(master_seed, replicate_index, kDirectSirStream));
  std::vector<std::uint8_t> infected(g.num_nodes(), 0);
  std::vector<NodeId> active, next;
  for (NodeId s : g.seeds()) {
    infected[s] = 1;
    active.push_back(s);
  }
  while (!active.empty()) {
    next.clear();
    for (NodeId u : active) {
      for (const Arc& a : g.out_arcs(u)) {
        if (!infected[a.dst] && rng.coin(a.p)) {
          infected[a.dst] = 1;
          next.push_back(a.dst);
        }
      }
    }
    for (NodeId u : active) {
      const double gamma = model.is_sir() ? model.gamma_of(u) : 1.0;
      if (!rng.coin(gamma)) next.push_back(u);
    }
    active.swap(next);
  }
  return infected;
}

inline std::vector<EstimateResult> estimate_infection_probabilities_direct(
    const ProbGraph& g, const CascadeModel& model, const EstimatorConfig& cfg) {
  if (cfg.replicates == 0) {
    throw Error(ErrorKind::kConfig, "replicate count must be at least 1");
  }
  model.validate(g);
  std::vector<Moments> m(g.num_nodes());
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const auto infected = simulate_sir(g, model, r, cfg.master_seed);
    for (NodeId u = 0; u < g.num_nodes(); ++u) m[u].add(infected[u]);
  }
  std::vector<EstimateResult> out;
  for (const Moments& x : m) {
    out.push_back({x.mean(), x.stderr_of_mean(), cfg.replicates,
                   cfg.master_seed});
  }
  return out;
}

}  // namespace netimmune

#endif  // NETIMMUNE_CASCADE_HPP_
