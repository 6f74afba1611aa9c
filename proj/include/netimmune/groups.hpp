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

// Immunization groups and their vaccine-acceptance policies.
//
// A policy decides which members of a chosen group end up immunized using
// only its own randomness; it never looks at the epidemic. Choosing a group l
// times draws l independent acceptance instances and immunizes their union.

#ifndef NETIMMUNE_GROUPS_HPP_
#define NETIMMUNE_GROUPS_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "netimmune/core.hpp"

namespace netimmune {

// Every member is immunized.
struct DeterministicPolicy {};

// Member i accepts independently with probability q[i].
struct IndependentPolicy {
  std::vector<double> q;
};

// Members are layer copies u(0), u(1), ...; u(0) always accepts and u(t+1)
// accepts with probability 1 - eps given that u(t) accepted.
struct LeakyChainPolicy {
  double eps = 0.0;
};

using Policy =
    std::variant<DeterministicPolicy, IndependentPolicy, LeakyChainPolicy>;

struct Group {
  GroupId id = 0;
  std::vector<NodeId> members;
  Policy policy;

  void validate(std::size_t num_nodes) const {
    const std::string name = "group " + std::to_string(id);
    if (members.empty()) throw Error(ErrorKind::kConfig, name + " is empty");
    for (NodeId u : members) {
      if (u >= num_nodes) {
        throw Error(ErrorKind::kConfig, name + " member " + std::to_string(u) +
                                            " is not a node");
      }
    }
    if (const auto* ind = std::get_if<IndependentPolicy>(&policy)) {
      if (ind->q.size() != members.size()) {
        throw Error(ErrorKind::kConfig,
                    name + " needs one acceptance probability per member");
      }
      for (double q : ind->q) {
        if (!(q >= 0.0 && q <= 1.0)) {
          throw Error(ErrorKind::kInvalidProbability,
                      name + " acceptance probability outside [0,1]");
        }
      }
    }
    if (const auto* leaky = std::get_if<LeakyChainPolicy>(&policy)) {
      if (!(leaky->eps >= 0.0 && leaky->eps <= 1.0)) {
        throw Error(ErrorKind::kInvalidProbability,
                    name + " leaky eps outside [0,1]");
      }
    }
  }
};

// One deterministic singleton group per node, with group id == node id.
inline std::vector<Group> singleton_groups(std::span<const NodeId> nodes) {
  std::vector<Group> groups;
  groups.reserve(nodes.size());
  for (NodeId u : nodes) groups.push_back({u, {u}, DeterministicPolicy{}});
  return groups;
}

inline constexpr std::uint64_t kAcceptanceStream = 0xacce97;

// Marks the members accepted by the given acceptance instance (1-based) of
// `group` in replicate `replicate_index`. Calls mark(node) per accepted node.
template <typename Mark>
void realize_instance(const Group& group, std::uint64_t instance,
                      std::uint64_t replicate_index, std::uint64_t master_seed,
                      Mark&& mark) {
  std::visit(
      [&](const auto& policy) {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, DeterministicPolicy>) {
          for (NodeId u : group.members) mark(u);
        } else {
          Stream rng(derive_seed(master_seed, replicate_index,
                                 kAcceptanceStream, group.id, instance));
          if constexpr (std::is_same_v<P, IndependentPolicy>) {
            for (std::size_t i = 0; i < group.members.size(); ++i) {
              if (rng.coin(policy.q[i])) mark(group.members[i]);
            }
          } else {
            mark(group.members.front());
            for (std::size_t i = 1; i < group.members.size(); ++i) {
              if (!rng.coin(1.0 - policy.eps)) break;
              mark(group.members[i]);
            }
          }
        }
      },
      group.policy);
}

// Union of `multiplicity` independent acceptance instances, ascending.
inline std::vector<NodeId> sample_acceptance(const Group& group,
                                             std::uint64_t multiplicity,
                                             std::uint64_t replicate_index,
                                             std::uint64_t master_seed) {
  if (multiplicity < 1) {
    throw Error(ErrorKind::kConfig, "multiplicity must be at least 1");
  }
  std::vector<NodeId> accepted;
  for (std::uint64_t l = 1; l <= multiplicity; ++l) {
    realize_instance(group, l, replicate_index, master_seed,
                     [&](NodeId u) { accepted.push_back(u); });
  }
  std::sort(accepted.begin(), accepted.end());
  accepted.erase(std::unique(accepted.begin(), accepted.end()),
                 accepted.end());
  return accepted;
}

}  // namespace netimmune

#endif  // NETIMMUNE_GROUPS_HPP_
