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

// Line-oriented text formats for graphs and immunization groups.
//
//   graph <n> <directed|undirected>
//   node <id> <utility>
//   seed <id>
//   edge <u> <v> <p>
//
//   group <gid> <deterministic|independent|leaky eps=<float>>
//   member <gid> <node> [q=<float>]
//
// '#' starts a comment. Writers are deterministic: nodes, then seeds, then
// edges in ascending id order, probabilities in shortest round-trip form.

#ifndef NETIMMUNE_IO_HPP_
#define NETIMMUNE_IO_HPP_

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/groups.hpp"

namespace netimmune {

inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line split into tokens; false at end of input.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++number_;
      if (auto hash = line_.find('#'); hash != std::string::npos) {
        line_.erase(hash);
      }
      tokens.clear();
      std::string_view rest(line_);
      while (!rest.empty()) {
        const auto start = rest.find_first_not_of(" \t\r");
        if (start == std::string_view::npos) break;
        rest.remove_prefix(start);
        const auto end = rest.find_first_of(" \t\r");
        tokens.push_back(rest.substr(0, end));
        if (end == std::string_view::npos) break;
        rest.remove_prefix(end);
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg,
                         ErrorKind kind = ErrorKind::kParse) const {
    throw Error(kind, "line " + std::to_string(number_) + ": " + msg);
  }

  template <typename T>
  T number(std::string_view tok, std::string_view what) const {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail("expected " + std::string(what) + ", got '" + std::string(tok) +
           "'");
    }
    return value;
  }

  double probability(std::string_view tok, std::string_view what) const {
    const double p = number<double>(tok, what);
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(std::string(what) + " " + std::string(tok) + " outside [0,1]",
           ErrorKind::kInvalidProbability);
    }
    return p;
  }

  std::size_t line_number() const { return number_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open '" + path + "'");
  return in;
}

}  // namespace detail

inline ProbGraph read_graph(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::string_view> tok;
  if (!reader.next(tok)) throw Error(ErrorKind::kParse, "empty graph file");
  if (tok.size() != 3 || tok[0] != "graph") {
    reader.fail("expected 'graph <n> <directed|undirected>'");
  }
  const auto n = reader.number<std::size_t>(tok[1], "node count");
  Directedness dir;
  if (tok[2] == "directed") {
    dir = Directedness::kDirected;
  } else if (tok[2] == "undirected") {
    dir = Directedness::kUndirected;
  } else {
    reader.fail("expected directed|undirected, got '" + std::string(tok[2]) +
                "'");
  }
  GraphBuilder builder(n, dir);
  std::set<std::pair<NodeId, NodeId>> seen;
  auto node_id = [&](std::string_view t) {
    const auto u = reader.number<NodeId>(t, "node id");
    if (u >= n) reader.fail("node " + std::string(t) + " out of range");
    return u;
  };
  while (reader.next(tok)) {
    if (tok[0] == "node" && tok.size() == 3) {
      const NodeId u = node_id(tok[1]);
      const double a = reader.number<double>(tok[2], "utility");
      if (!(a >= 0.0) || !std::isfinite(a)) {
        reader.fail("utility must be finite and nonnegative");
      }
      builder.utility(u, a);
    } else if (tok[0] == "seed" && tok.size() == 2) {
      builder.seed(node_id(tok[1]));
    } else if (tok[0] == "edge" && tok.size() == 4) {
      const NodeId u = node_id(tok[1]);
      const NodeId v = node_id(tok[2]);
      const double p = reader.probability(tok[3], "probability");
      if (u == v) reader.fail("self-loop on node " + std::string(tok[1]));
      const bool fresh = seen.insert({u, v}).second &&
                         (dir == Directedness::kDirected ||
                          seen.insert({v, u}).second);
      if (!fresh) reader.fail("duplicate edge " + std::string(tok[1]) + " " +
                              std::string(tok[2]));
      if (dir == Directedness::kDirected) {
        builder.arc(u, v, p);
      } else {
        builder.edge(u, v, p);
      }
    } else {
      reader.fail("unrecognized line starting with '" + std::string(tok[0]) +
                  "'");
    }
  }
  return std::move(builder).build();
}

inline ProbGraph load_graph(const std::string& path) {
  auto in = detail::open_input(path);
  return read_graph(in);
}

inline void write_graph(const ProbGraph& g, std::ostream& out) {
  out << "graph " << g.num_nodes() << ' '
      << (g.directed() ? "directed" : "undirected") << '\n';
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (g.utility(u) != 1.0) {
      out << "node " << u << ' ' << format_double(g.utility(u)) << '\n';
    }
  }
  for (NodeId s : g.seeds()) out << "seed " << s << '\n';
  for (const Arc& a : g.arcs()) {
    if (!g.directed() && a.src > a.dst) continue;
    out << "edge " << a.src << ' ' << a.dst << ' ' << format_double(a.p)
        << '\n';
  }
}

inline void save_graph(const ProbGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kConfig, "cannot write '" + path + "'");
  write_graph(g, out);
}

// Groups appear in ascending id order; members keep their file order (the
// layer order for leaky groups).
inline std::vector<Group> read_groups(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::string_view> tok;
  std::map<GroupId, Group> groups;
  while (reader.next(tok)) {
    if (tok[0] == "group" && (tok.size() == 3 || tok.size() == 4)) {
      const auto id = reader.number<GroupId>(tok[1], "group id");
      if (groups.contains(id)) {
        reader.fail("group " + std::string(tok[1]) + " defined twice");
      }
      Group g{id, {}, DeterministicPolicy{}};
      if (tok[2] == "independent" && tok.size() == 3) {
        g.policy = IndependentPolicy{};
      } else if (tok[2] == "leaky" && tok.size() == 4 &&
                 tok[3].starts_with("eps=")) {
        g.policy = LeakyChainPolicy{
            reader.probability(tok[3].substr(4), "leaky eps")};
      } else if (tok[2] != "deterministic" || tok.size() != 3) {
        reader.fail("expected deterministic|independent|leaky eps=<float>");
      }
      groups.emplace(id, std::move(g));
    } else if (tok[0] == "member" && (tok.size() == 3 || tok.size() == 4)) {
      const auto id = reader.number<GroupId>(tok[1], "group id");
      auto it = groups.find(id);
      if (it == groups.end()) {
        reader.fail("member of undeclared group " + std::string(tok[1]));
      }
      Group& g = it->second;
      g.members.push_back(reader.number<NodeId>(tok[2], "node id"));
      auto* ind = std::get_if<IndependentPolicy>(&g.policy);
      if (tok.size() == 4) {
        if (!tok[3].starts_with("q=") || ind == nullptr) {
          reader.fail("q=<float> is only valid for independent groups");
        }
        ind->q.push_back(reader.probability(tok[3].substr(2), "q"));
      } else if (ind != nullptr) {
        reader.fail("independent group member needs q=<float>");
      }
    } else {
      reader.fail("unrecognized line starting with '" + std::string(tok[0]) +
                  "'");
    }
  }
  std::vector<Group> out;
  for (auto& [id, g] : groups) {
    if (g.members.empty()) {
      throw Error(ErrorKind::kConfig,
                  "group " + std::to_string(id) + " has no members");
    }
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<Group> load_groups(const std::string& path) {
  auto in = detail::open_input(path);
  return read_groups(in);
}

inline void write_groups(std::span<const Group> groups, std::ostream& out) {
  for (const Group& g : groups) {
    out << "group " << g.id << ' ';
    if (std::holds_alternative<DeterministicPolicy>(g.policy)) {
      out << "deterministic";
    } else if (std::holds_alternative<IndependentPolicy>(g.policy)) {
      out << "independent";
    } else {
      out << "leaky eps="
          << format_double(std::get<LeakyChainPolicy>(g.policy).eps);
    }
    out << '\n';
    const auto* ind = std::get_if<IndependentPolicy>(&g.policy);
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      out << "member " << g.id << ' ' << g.members[i];
      if (ind) out << " q=" << format_double(ind->q[i]);
      out << '\n';
    }
  }
}

}  // namespace netimmune

#endif  // NETIMMUNE_IO_HPP_
