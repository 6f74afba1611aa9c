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

// Approximation-factor sweeps over random graph ensembles.

#ifndef NETIMMUNE_SWEEP_HPP_
#define NETIMMUNE_SWEEP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "netimmune/bounds.hpp"
#include "netimmune/core.hpp"
#include "netimmune/generate.hpp"
#include "netimmune/io.hpp"

namespace netimmune {

struct SweepConfig {
  std::vector<GraphModel> models{GraphModel::kErdosRenyi};
  std::size_t n = 5000;
  std::vector<double> avg_degrees{10.0, 20.0, 30.0};
  std::vector<double> r0_grid{1.0};
  std::vector<std::size_t> ks{50};
  std::size_t reps = 5;
  // Recovery probabilities for SIR sweeps; empty means IC.
  std::vector<double> gammas;
  double rewire = 0.1;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const {
    if (models.empty() || avg_degrees.empty() || r0_grid.empty() ||
        ks.empty()) {
      throw Error(ErrorKind::kConfig, "sweep grids must be non-empty");
    }
    if (reps < 1) throw Error(ErrorKind::kConfig, "reps must be >= 1");
    for (std::size_t k : ks) {
      if (k < 1) throw Error(ErrorKind::kConfig, "k must be >= 1");
    }
  }
};

struct SweepRow {
  GraphModel model = GraphModel::kErdosRenyi;
  std::size_t n = 0;
  double avg_degree = 0.0;
  std::optional<double> gamma;
  double r0 = 0.0;
  std::size_t k = 0;
  std::size_t rep = 0;
  double factor = 0.0;
  double lambda_prime = 0.0;
  std::size_t n_s = 0;
};

// Parses "min:max:step" (inclusive of max up to rounding) or a single value.
inline std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw Error(ErrorKind::kConfig, "bad number '" + s + "' in grid");
    }
    return x;
  };
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) return {number(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw Error(ErrorKind::kConfig, "grid must look like min:max:step");
  }
  const double lo = number(spec.substr(0, c1));
  const double hi = number(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = number(spec.substr(c2 + 1));
  if (!(step > 0.0) || hi < lo) {
    throw Error(ErrorKind::kConfig, "grid needs step > 0 and max >= min");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + step * i);
  return grid;
}

namespace detail {

inline auto sweep_key(const SweepRow& r) {
  return std::make_tuple(std::string(model_name(r.model)), r.avg_degree,
                         r.gamma.value_or(0.0), r.r0, r.k, r.rep);
}

}  // namespace detail

// One graph per (model, avg_degree, rep); its topology is reused for every
// R0, gamma and k so rows of one cell differ only in transmission strength.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Job {
    GraphModel model;
    double avg_degree;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (GraphModel m : cfg.models) {
    for (double d : cfg.avg_degrees) {
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) jobs.push_back({m, d, rep});
    }
  }
  std::vector<std::vector<SweepRow>> results(jobs.size());
  const std::vector<std::optional<double>> gammas = [&] {
    std::vector<std::optional<double>> out;
    if (cfg.gammas.empty()) out.push_back(std::nullopt);
    for (double g : cfg.gammas) out.push_back(g);
    return out;
  }();

  for_each_chunk(jobs.size(), 1, cfg.threads,
                 [&](std::size_t begin, std::size_t, std::size_t) {
    const Job& job = jobs[begin];
    GenConfig gen;
    gen.model = job.model;
    gen.n = cfg.n;
    gen.avg_degree = job.avg_degree;
    gen.rewire = cfg.rewire;
    gen.r0 = 0.0;
    gen.rng_seed = derive_seed(
        cfg.seed, static_cast<std::uint64_t>(job.model),
        static_cast<std::uint64_t>(std::llround(job.avg_degree * 1000)),
        job.rep);
    const auto edges = generate_topology(gen);
    std::vector<double> degree(cfg.n, 0.0);
    for (const auto& [u, v] : edges) {
      degree[u] += 1.0;
      degree[v] += 1.0;
    }
    std::vector<double> lambdas(cfg.n);
    for (const auto& gamma : gammas) {
      for (double r0 : cfg.r0_grid) {
        const double p = r0 * gamma.value_or(1.0) / job.avg_degree;
        if (!(p >= 0.0 && p <= 1.0)) {
          throw Error(ErrorKind::kInvalidProbability,
                      "sweep transmission probability " + std::to_string(p) +
                          " outside [0,1]");
        }
        for (std::size_t u = 0; u < cfg.n; ++u) {
          lambdas[u] = gamma ? effective_degree_sir(p, degree[u], *gamma)
                             : effective_degree_ic(p, degree[u]);
        }
        for (std::size_t k : cfg.ks) {
          const BoundReport rep = optimize_threshold(lambdas, k);
          results[begin].push_back({job.model, cfg.n, job.avg_degree, gamma,
                                    r0, k, job.rep, rep.factor,
                                    rep.lambda_prime, rep.n_s});
        }
      }
    }
  });

  std::vector<SweepRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return detail::sweep_key(a) < detail::sweep_key(b);
  });
  return rows;
}

struct SweepCell {
  GraphModel model;
  double avg_degree;
  std::optional<double> gamma;
  double r0;
  std::size_t k;
  Moments factor;
  Moments lambda_prime;
  Moments n_s;
};

// Mean and standard deviation across repetitions, in row order.
inline std::vector<SweepCell> aggregate_sweep(const std::vector<SweepRow>& rows) {
  std::vector<SweepCell> cells;
  for (const SweepRow& r : rows) {
    if (cells.empty() || cells.back().model != r.model ||
        cells.back().avg_degree != r.avg_degree ||
        cells.back().gamma != r.gamma || cells.back().r0 != r.r0 ||
        cells.back().k != r.k) {
      cells.push_back({r.model, r.avg_degree, r.gamma, r.r0, r.k, {}, {}, {}});
    }
    cells.back().factor.add(r.factor);
    cells.back().lambda_prime.add(r.lambda_prime);
    cells.back().n_s.add(static_cast<double>(r.n_s));
  }
  return cells;
}

// Columns model,n,avg_degree,R0,k,rep,factor,lambda_prime,n_s (plus gamma for
// SIR sweeps). Each cell's repetitions are followed by "mean" and "std" rows.
inline void write_sweep_csv(const std::vector<SweepRow>& rows,
                            std::ostream& out) {
  const bool sir = !rows.empty() && rows.front().gamma.has_value();
  out << "model,n,avg_degree,R0,k,rep,factor,lambda_prime,n_s"
      << (sir ? ",gamma" : "") << '\n';
  auto prefix = [&](const SweepRow& r) {
    out << model_name(r.model) << ',' << r.n << ','
        << format_double(r.avg_degree) << ',' << format_double(r.r0) << ','
        << r.k << ',';
  };
  auto suffix = [&](const SweepRow& r) {
    if (sir) out << ',' << format_double(*r.gamma);
    out << '\n';
  };
  const auto cells = aggregate_sweep(rows);
  std::size_t next = 0;
  for (const SweepCell& c : cells) {
    const SweepRow* first = nullptr;
    for (std::size_t i = 0; i < c.factor.count; ++i, ++next) {
      const SweepRow& r = rows[next];
      if (!first) first = &r;
      prefix(r);
      out << r.rep << ',' << format_double(r.factor) << ','
          << format_double(r.lambda_prime) << ',' << r.n_s;
      suffix(r);
    }
    prefix(*first);
    out << "mean," << format_double(c.factor.mean()) << ','
        << format_double(c.lambda_prime.mean()) << ','
        << format_double(c.n_s.mean());
    suffix(*first);
    prefix(*first);
    out << "std," << format_double(c.factor.stddev()) << ','
        << format_double(c.lambda_prime.stddev()) << ','
        << format_double(c.n_s.stddev());
    suffix(*first);
  }
}

}  // namespace netimmune

#endif  // NETIMMUNE_SWEEP_HPP_
