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

// Data-dependent approximation guarantees for greedy immunization.
//
// The effective degree of a node u with largest incident probability p_u and
// d_u distinct neighbours is lambda_u = (1 - p_u)^(-d_u / 2) - 1. With
// phi(lambda) = lambda / (e^lambda - 1), greedy selection of k nodes (or
// groups) achieves 1 - exp(-phi(lambda)) of the optimum, lambda being the
// largest effective degree. Forcing the n_s nodes above a threshold lambda'
// into the solution first improves this to
// 1 - exp(-(1 - n_s / k) * phi(lambda')).

#ifndef NETIMMUNE_BOUNDS_HPP_
#define NETIMMUNE_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netimmune/cascade.hpp"
#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/io.hpp"
#include "netimmune/transforms.hpp"

namespace netimmune {

// lambda / (e^lambda - 1), with phi(0) = 1 and phi(inf) = 0.
inline double phi(double lambda) {
  if (std::isnan(lambda) || lambda < 0.0) {
    throw Error(ErrorKind::kDomain, "phi is defined for lambda >= 0");
  }
  if (lambda == 0.0) return 1.0;
  if (lambda == kInfinity) return 0.0;
  return lambda / std::expm1(lambda);
}

// 1 - exp(-(1 - n_s/k) * phi(lambda')).
inline double approximation_factor(double lambda_prime, std::size_t n_s,
                                   std::size_t k) {
  const double keep = 1.0 - static_cast<double>(n_s) / static_cast<double>(k);
  return -std::expm1(-keep * phi(lambda_prime));
}

// (1 - p)^(-d/2) - 1; +inf when p = 1 and d > 0. The degree is a real
// exponent, not rounded.
inline double effective_degree_ic(double p, double degree) {
  if (p <= 0.0 || degree <= 0.0) return 0.0;
  if (p >= 1.0) return kInfinity;
  return std::expm1(-0.5 * degree * std::log1p(-p));
}

// SIR emulation: with B = (1 - p)^(-d/2), lambda = gamma B / (1 - (1-gamma) B)
// - 1, evaluated as (B - 1) / (1 - (1-gamma) B) so gamma = 1 reproduces the IC
// value exactly. Diverges (+inf) once (1 - gamma) B >= 1.
inline double effective_degree_sir(double p, double degree, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::kDomain, "recovery probability must lie in (0,1]");
  }
  const double ic = effective_degree_ic(p, degree);
  if (ic == kInfinity) return kInfinity;
  const double denom = 1.0 - (1.0 - gamma) * (1.0 + ic);
  if (denom <= 0.0) return kInfinity;
  return ic / denom;
}

// Inserted link node: two incident arcs, one of which can always be cut.
inline double effective_degree_link(double p) {
  if (p >= 1.0) return kInfinity;
  if (p <= 0.0) return 0.0;
  return p / (1.0 - p);
}

struct DegreeStats {
  double p_max = 0.0;       // largest incident (in or out) arc probability
  std::size_t degree = 0;   // distinct neighbours, undirected view
};

// Structural arcs are ignored.
inline std::vector<DegreeStats> degree_stats(const ProbGraph& g) {
  std::vector<DegreeStats> stats(g.num_nodes());
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(2 * g.num_arcs());
  for (const Arc& a : g.arcs()) {
    if (a.structural) continue;
    pairs.emplace_back(a.src, a.dst);
    pairs.emplace_back(a.dst, a.src);
    stats[a.src].p_max = std::max(stats[a.src].p_max, a.p);
    stats[a.dst].p_max = std::max(stats[a.dst].p_max, a.p);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (const auto& [u, v] : pairs) ++stats[u].degree;
  return stats;
}

inline double effective_degree_ic(const ProbGraph& g, NodeId u) {
  const DegreeStats s = degree_stats(g)[u];
  return effective_degree_ic(s.p_max, static_cast<double>(s.degree));
}

inline double effective_degree_sir(const ProbGraph& g, NodeId u,
                                   double gamma) {
  const DegreeStats s = degree_stats(g)[u];
  return effective_degree_sir(s.p_max, static_cast<double>(s.degree), gamma);
}

enum class DegreeModel { kIC, kSIR, kLink, kHousehold };

struct EffectiveDegreeProfile {
  DegreeModel model = DegreeModel::kIC;
  std::vector<NodeId> nodes;   // candidate (or household / link) index
  std::vector<double> lambda;  // parallel to nodes, may contain +inf

  double max() const {
    double m = 0.0;
    for (double x : lambda) m = std::max(m, x);
    return m;
  }
  std::vector<double> sorted_descending() const {
    std::vector<double> s = lambda;
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  }
};

// IC (or SIR, when model is SIR) effective degrees of the candidates;
// candidates default to the non-seed nodes.
inline EffectiveDegreeProfile effective_degree_profile(
    const ProbGraph& g, const CascadeModel& model = CascadeModel::ic(),
    std::optional<std::vector<NodeId>> candidates = std::nullopt) {
  model.validate(g);
  const auto stats = degree_stats(g);
  EffectiveDegreeProfile profile;
  profile.model = model.is_sir() ? DegreeModel::kSIR : DegreeModel::kIC;
  profile.nodes = candidates ? std::move(*candidates) : g.non_seed_nodes();
  profile.lambda.reserve(profile.nodes.size());
  for (NodeId u : profile.nodes) {
    const auto d = static_cast<double>(stats[u].degree);
    profile.lambda.push_back(
        model.is_sir()
            ? effective_degree_sir(stats[u].p_max, d, model.gamma_of(u))
            : effective_degree_ic(stats[u].p_max, d));
  }
  return profile;
}

inline EffectiveDegreeProfile link_profile(const LinkSplit& split) {
  EffectiveDegreeProfile profile;
  profile.model = DegreeModel::kLink;
  profile.nodes = split.candidates;
  for (double p : split.arc_p) profile.lambda.push_back(effective_degree_link(p));
  return profile;
}

// (1 - p)^(-d_H/2) - 1 for a household with d_H external incident edges of
// probability at most p.
inline double household_lambda(double p, double external_degree) {
  return effective_degree_ic(p, external_degree);
}

// One entry per household, indexed by household position. p is the largest
// probability on an edge leaving the household.
inline EffectiveDegreeProfile household_profile(
    const ProbGraph& g, std::span<const std::vector<NodeId>> households) {
  std::vector<std::size_t> owner(g.num_nodes(), households.size());
  for (std::size_t h = 0; h < households.size(); ++h) {
    for (NodeId u : households[h]) owner[u] = h;
  }
  std::vector<double> p_max(households.size(), 0.0);
  std::vector<std::vector<std::pair<NodeId, NodeId>>> crossing(
      households.size());
  for (const Arc& a : g.arcs()) {
    if (a.structural || owner[a.src] == owner[a.dst]) continue;
    const auto edge = std::minmax(a.src, a.dst);
    for (std::size_t h : {owner[a.src], owner[a.dst]}) {
      if (h == households.size()) continue;
      p_max[h] = std::max(p_max[h], a.p);
      crossing[h].push_back(edge);
    }
  }
  EffectiveDegreeProfile profile;
  profile.model = DegreeModel::kHousehold;
  for (std::size_t h = 0; h < households.size(); ++h) {
    auto& c = crossing[h];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    profile.nodes.push_back(static_cast<NodeId>(h));
    profile.lambda.push_back(
        household_lambda(p_max[h], static_cast<double>(c.size())));
  }
  return profile;
}

struct BoundRow {
  std::size_t i = 0;  // 1-based position in the descending lambda list
  double lambda_prime = 0.0;
  std::size_t n_s = 0;
  double factor = 0.0;
};

struct BoundReport {
  double lambda_prime = 0.0;
  std::size_t n_s = 0;
  std::size_t k = 0;
  double factor = 0.0;
  // Selecting k + n_s items gives a (budget_multiplier, factor) bicriteria
  // guarantee.
  double bicriteria_budget = 1.0;
  double bicriteria_factor = 0.0;
  std::vector<BoundRow> table;
};

// Tries lambda' = L[i] for i = 1..k over the descending list L with
// n_s = i - 1 and keeps the best factor (the smallest n_s on ties).
inline BoundReport optimize_threshold(std::span<const double> lambdas,
                                      std::size_t k) {
  if (lambdas.empty()) {
    throw Error(ErrorKind::kConfig, "effective degree profile is empty");
  }
  if (k < 1) throw Error(ErrorKind::kConfig, "k must be at least 1");
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  const std::size_t limit = std::min(k, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + limit, sorted.end(),
                    std::greater<>());
  BoundReport report;
  report.k = k;
  report.factor = -1.0;
  for (std::size_t i = 1; i <= limit; ++i) {
    const BoundRow row{i, sorted[i - 1], i - 1,
                       approximation_factor(sorted[i - 1], i - 1, k)};
    report.table.push_back(row);
    if (row.factor > report.factor) {
      report.factor = row.factor;
      report.lambda_prime = row.lambda_prime;
      report.n_s = row.n_s;
    }
  }
  report.bicriteria_budget =
      1.0 + static_cast<double>(report.n_s) / static_cast<double>(k);
  report.bicriteria_factor = -std::expm1(-phi(report.lambda_prime));
  return report;
}

inline BoundReport optimize_threshold(const EffectiveDegreeProfile& profile,
                                      std::size_t k) {
  return optimize_threshold(profile.lambda, k);
}

// Closed form for a graph with uniform p = R0 / avg_degree and maximum degree
// skew * avg_degree.
inline double factor_vs_r0(double avg_degree, double skew, double r0) {
  if (!(r0 >= 0.0) || !(r0 < avg_degree)) {
    throw Error(ErrorKind::kDomain, "need 0 <= R0 < avg_degree");
  }
  if (!(skew >= 1.0)) throw Error(ErrorKind::kDomain, "skew must be >= 1");
  const double lambda =
      effective_degree_ic(r0 / avg_degree, skew * avg_degree);
  return -std::expm1(-phi(lambda));
}

// Greedy over whole households of size a: 1 - exp(-phi(Lambda) / a).
inline double household_factor(double household_lambda_max, double size) {
  if (!(size >= 1.0)) throw Error(ErrorKind::kDomain, "household size >= 1");
  return -std::expm1(-phi(household_lambda_max) / size);
}

// Hoeffding bound for m * k evaluations of a statistic bounded in [0, U]:
// ceil(U^2 ln(2 m k / delta) / (2 eps^2)).
inline std::size_t recommended_replicates(double total_utility, std::size_t k,
                                          std::size_t m, double eps_abs,
                                          double delta) {
  if (!(eps_abs > 0.0)) throw Error(ErrorKind::kDomain, "eps must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kDomain, "delta must lie in (0,1)");
  }
  const double evaluations =
      static_cast<double>(std::max<std::size_t>(m, 1)) *
      static_cast<double>(std::max<std::size_t>(k, 1));
  const double r = total_utility * total_utility *
                   std::log(2.0 * evaluations / delta) /
                   (2.0 * eps_abs * eps_abs);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(r)));
}

// Columns i,lambda_prime,n_s,factor; the final "best" row is the summary.
inline void write_bound_csv(const BoundReport& report, std::ostream& out) {
  out << "i,lambda_prime,n_s,factor\n";
  for (const BoundRow& row : report.table) {
    out << row.i << ',' << format_double(row.lambda_prime) << ',' << row.n_s
        << ',' << format_double(row.factor) << '\n';
  }
  out << "best," << format_double(report.lambda_prime) << ',' << report.n_s
      << ',' << format_double(report.factor) << '\n';
}

}  // namespace netimmune

#endif  // NETIMMUNE_BOUNDS_HPP_
