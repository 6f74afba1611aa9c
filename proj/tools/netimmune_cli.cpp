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

// Command-line front end: graph generation, bounds, sweeps, greedy
// immunization, Monte Carlo estimation and exact oracle checks.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netimmune/netimmune.hpp"

namespace {

using namespace netimmune;

constexpr int kExitValidation = 2;
constexpr int kExitSizeCap = 3;

// Writes to the named file, or stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::kConfig, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string NodeSet(std::span<const NodeId> nodes) {
  std::string out = "{";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(nodes[i]);
  }
  return out + "}";
}

CascadeModel ModelFrom(const std::optional<double>& gamma) {
  return gamma ? CascadeModel::sir(*gamma) : CascadeModel::ic();
}

ProbGraph LoadWithSeeds(const std::string& path,
                        const std::vector<NodeId>& seeds) {
  ProbGraph g = load_graph(path);
  return seeds.empty() ? g : with_seeds(g, seeds);
}

struct GenArgs {
  std::string model = "er";
  std::size_t n = 5000;
  double avg_degree = 10;
  double r0 = 1.0;
  double rewire = 0.1;
  std::size_t attach = 0;
  std::uint64_t seed = 0;
  double seed_fraction = 0.01;
  std::vector<NodeId> seeds;
  std::string out;
};

int RunGen(const GenArgs& a) {
  GenConfig c;
  c.model = parse_model(a.model);
  c.n = a.n;
  c.avg_degree = a.avg_degree;
  c.r0 = a.r0;
  c.rewire = a.rewire;
  if (a.attach > 0) c.attach = a.attach;
  c.rng_seed = a.seed;
  const ProbGraph g = generate(c);
  const ProbGraph seeded = a.seeds.empty()
                               ? with_random_seeds(g, a.seed_fraction, a.seed)
                               : with_seeds(g, a.seeds);
  Output out(a.out);
  write_graph(seeded, out.stream());
  return 0;
}

struct BoundArgs {
  std::string graph;
  std::size_t k = 0;
  bool link = false;
  std::optional<double> gamma;
  std::size_t household = 0;
  std::vector<NodeId> seeds;
  std::string out;
};

int RunBound(const BoundArgs& a) {
  const ProbGraph g = LoadWithSeeds(a.graph, a.seeds);
  if (a.household > 0) {
    HouseholdGraph h;
    h.graph = g;
    for (NodeId u = 0; u < g.num_nodes(); u += a.household) {
      std::vector<NodeId> members;
      for (NodeId v = u; v < std::min<std::size_t>(g.num_nodes(), u + a.household); ++v) {
        members.push_back(v);
      }
      h.households.push_back(std::move(members));
    }
    const auto profile = household_profile(g, h.households);
    const double big = profile.max();
    std::cout << "households=" << h.households.size()
              << " Lambda=" << format_double(big) << " factor="
              << format_double(household_factor(big, static_cast<double>(a.household)))
              << '\n';
    return 0;
  }
  EffectiveDegreeProfile profile =
      a.link ? link_profile(split_for_link_immunization(g))
             : effective_degree_profile(g, ModelFrom(a.gamma));
  const BoundReport r = optimize_threshold(profile, a.k);
  std::cout << "lambda_prime=" << format_double(r.lambda_prime)
            << " n_s=" << r.n_s << " k=" << r.k
            << " factor=" << format_double(r.factor)
            << " bicriteria_budget=" << format_double(r.bicriteria_budget)
            << " bicriteria_factor=" << format_double(r.bicriteria_factor)
            << '\n';
  if (!a.out.empty()) {
    Output out(a.out);
    write_bound_csv(r, out.stream());
  }
  return 0;
}

struct SweepArgs {
  std::vector<std::string> models{"ws", "er", "ba"};
  std::size_t n = 5000;
  std::vector<double> avg_degrees{10, 20, 30};
  std::string r0 = "0.5:2:0.25";
  std::vector<std::size_t> ks{50, 100, 150, 200, 250, 300};
  std::size_t reps = 5;
  std::vector<double> gammas;
  double rewire = 0.1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

int RunSweep(const SweepArgs& a) {
  SweepConfig cfg;
  cfg.models.clear();
  for (const auto& m : a.models) cfg.models.push_back(parse_model(m));
  cfg.n = a.n;
  cfg.avg_degrees = a.avg_degrees;
  cfg.r0_grid = parse_grid(a.r0);
  cfg.ks = a.ks;
  cfg.reps = a.reps;
  cfg.gammas = a.gammas;
  cfg.rewire = a.rewire;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  const auto rows = run_sweep(cfg);
  Output out(a.out);
  write_sweep_csv(rows, out.stream());
  return 0;
}

struct GreedyArgs {
  std::string graph;
  std::string groups;
  std::size_t k = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool multiset = false;
  std::optional<double> gamma;
  std::optional<double> prefix_lambda;
  bool bicriteria = false;
  std::vector<NodeId> seeds;
  std::string out;
};

int RunGreedy(const GreedyArgs& a) {
  const ProbGraph g = LoadWithSeeds(a.graph, a.seeds);
  const CascadeModel model = ModelFrom(a.gamma);
  const EstimatorConfig cfg{a.replicates, a.seed, a.threads};
  Selection s;
  if (a.prefix_lambda) {
    if (!a.groups.empty() || a.multiset) {
      throw Error(ErrorKind::kConfig,
                  "--prefix-lambda works on single nodes only");
    }
    s = prefix_greedy(g, a.k, *a.prefix_lambda, model, cfg,
                      a.bicriteria ? PrefixMode::kBicriteria
                                   : PrefixMode::kPrefix);
  } else if (a.bicriteria) {
    throw Error(ErrorKind::kConfig, "--bicriteria needs --prefix-lambda");
  } else {
    const auto groups = a.groups.empty() ? singleton_groups(g.non_seed_nodes())
                                         : load_groups(a.groups);
    s = greedy(g, groups, a.k, model, cfg, a.multiset);
  }
  Output out(a.out);
  std::ostream& os = out.stream();
  os << "step,group,multiplicity,gain,stderr,forced\n";
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const SelectionStep& st = s.steps[i];
    os << i + 1 << ',' << st.group << ',' << st.multiplicity << ','
       << format_double(st.gain.gain) << ',' << format_double(st.gain.std_error)
       << ',' << (st.forced ? 1 : 0) << '\n';
  }
  os << "total,,,"
     << format_double(s.value.mean) << ',' << format_double(s.value.std_error)
     << ",\n";
  return 0;
}

struct EstimateArgs {
  std::string graph;
  std::vector<NodeId> removed;
  std::size_t replicates = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<double> gamma;
  std::vector<NodeId> seeds;
};

int RunEstimate(const EstimateArgs& a) {
  const ProbGraph g = LoadWithSeeds(a.graph, a.seeds);
  const EstimatorConfig cfg{a.replicates, a.seed, a.threads};
  const CascadeModel model = ModelFrom(a.gamma);
  const EstimateResult sigma = estimate_sigma(g, model, cfg);
  std::cout << "quantity,mean,stderr,replicates\n";
  std::cout << "sigma," << format_double(sigma.mean) << ','
            << format_double(sigma.std_error) << ',' << sigma.replicates << '\n';
  if (!a.removed.empty()) {
    const EstimateResult pi = estimate_pi(g, model, a.removed, cfg);
    std::cout << "pi," << format_double(pi.mean) << ','
              << format_double(pi.std_error) << ',' << pi.replicates << '\n';
  }
  return 0;
}

struct OracleArgs {
  std::string fixture;
  std::size_t a = 3;
  std::string graph;
  std::size_t k = 2;
  std::vector<NodeId> removed;
  bool has_removed = false;
};

int RunOracle(const OracleArgs& a) {
  ProbGraph g;
  if (!a.fixture.empty() == !a.graph.empty()) {
    throw Error(ErrorKind::kConfig, "give exactly one of --fixture or --graph");
  }
  if (a.fixture == "counterexample-a") {
    g = counterexample_a();
  } else if (a.fixture == "counterexample-b") {
    g = counterexample_b(a.a);
  } else if (!a.fixture.empty()) {
    throw Error(ErrorKind::kConfig, "unknown fixture '" + a.fixture +
                                        "' (counterexample-a|counterexample-b)");
  } else {
    g = load_graph(a.graph);
  }
  if (a.has_removed) {
    std::cout << "pi(" << NodeSet(a.removed)
              << ")=" << format_double(exact_pi(g, a.removed).value) << '\n';
    return 0;
  }
  const OptimumResult opt = exhaustive_opt(g, a.k);
  std::cout << "S*=" << NodeSet(opt.nodes) << ", pi=" << format_double(opt.value)
            << '\n';
  if (a.k > 0 && !g.non_seed_nodes().empty()) {
    const std::size_t k = std::min(a.k, g.non_seed_nodes().size());
    const Selection s = exact_greedy_nodes(g, k);
    const auto chosen = s.chosen();
    const double lambda = max_effective_degree(g);
    std::cout << "greedy=" << NodeSet(std::vector<NodeId>(chosen.begin(), chosen.end()))
              << ", pi=" << format_double(s.value.mean)
              << ", lambda=" << format_double(lambda)
              << ", guarantee=" << format_double(-std::expm1(-phi(lambda)))
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network immunization: bounds, greedy selection, estimation"};
  app.require_subcommand(1);
  int code = 0;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random graph file");
  gen_cmd->add_option("--model", gen.model, "er, ws or ba")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Node count")->capture_default_str();
  gen_cmd->add_option("--avg-degree", gen.avg_degree, "Mean degree")->capture_default_str();
  gen_cmd->add_option("--r0", gen.r0, "Sets p = R0 / avg-degree")->capture_default_str();
  gen_cmd->add_option("--rewire", gen.rewire, "WS rewiring probability")->capture_default_str();
  gen_cmd->add_option("--attach", gen.attach, "BA edges per new node (default avg-degree/2)");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--seed-fraction", gen.seed_fraction,
                      "Fraction of nodes initially infected")->capture_default_str();
  gen_cmd->add_option("--seeds", gen.seeds, "Explicit infected nodes")->delimiter(',');
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");
  gen_cmd->callback([&] { code = RunGen(gen); });

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Approximation factor of a graph");
  bound_cmd->add_option("--graph", bound.graph, "Graph file")->required();
  bound_cmd->add_option("--k", bound.k, "Budget")->required();
  bound_cmd->add_flag("--link", bound.link, "Link immunization");
  bound_cmd->add_option("--sir-gamma", bound.gamma, "SIR recovery probability");
  bound_cmd->add_option("--household-size", bound.household,
                        "Consecutive-id households of this size");
  bound_cmd->add_option("--seeds", bound.seeds, "Override infected nodes")->delimiter(',');
  bound_cmd->add_option("--out", bound.out, "CSV with the full threshold table");
  bound_cmd->callback([&] { code = RunBound(bound); });

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Bound sweep over random graphs (CSV)");
  sweep_cmd->add_option("--model", sweep.models, "Models")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--n", sweep.n, "Node count")->capture_default_str();
  sweep_cmd->add_option("--avg-degree", sweep.avg_degrees, "Mean degrees")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--r0", sweep.r0, "R0 grid min:max:step")->capture_default_str();
  sweep_cmd->add_option("--k", sweep.ks, "Budgets")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--reps", sweep.reps, "Graphs per setting")->capture_default_str();
  sweep_cmd->add_option("--gamma", sweep.gammas, "SIR recovery grid")->delimiter(',');
  sweep_cmd->add_option("--rewire", sweep.rewire, "WS rewiring probability")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "RNG seed")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Output path (default stdout)");
  sweep_cmd->callback([&] { code = RunSweep(sweep); });

  GreedyArgs greedy_args;
  auto* greedy_cmd = app.add_subcommand("greedy", "Greedy immunization (CSV)");
  greedy_cmd->add_option("--graph", greedy_args.graph, "Graph file")->required();
  greedy_cmd->add_option("--groups", greedy_args.groups, "Groups file (default: nodes)");
  greedy_cmd->add_option("--k", greedy_args.k, "Budget")->required();
  greedy_cmd->add_option("--replicates", greedy_args.replicates,
                         "Monte Carlo replicates (0: Hoeffding default)")->capture_default_str();
  greedy_cmd->add_option("--seed", greedy_args.seed, "Master seed")->capture_default_str();
  greedy_cmd->add_option("--threads", greedy_args.threads, "Worker threads")->capture_default_str();
  greedy_cmd->add_flag("--multiset", greedy_args.multiset, "Allow repeated groups");
  greedy_cmd->add_option("--sir-gamma", greedy_args.gamma, "SIR recovery probability");
  greedy_cmd->add_option("--prefix-lambda", greedy_args.prefix_lambda,
                         "Force nodes with effective degree above this first");
  greedy_cmd->add_flag("--bicriteria", greedy_args.bicriteria,
                       "Spend k greedy picks after the forced prefix");
  greedy_cmd->add_option("--seeds", greedy_args.seeds, "Override infected nodes")->delimiter(',');
  greedy_cmd->add_option("--out", greedy_args.out, "Output path (default stdout)");
  greedy_cmd->callback([&] { code = RunGreedy(greedy_args); });

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo spread and saved utility");
  est_cmd->add_option("--graph", est.graph, "Graph file")->required();
  est_cmd->add_option("--removed", est.removed, "Immunized nodes")->delimiter(',');
  est_cmd->add_option("--replicates", est.replicates, "Replicates")->capture_default_str();
  est_cmd->add_option("--seed", est.seed, "Master seed")->capture_default_str();
  est_cmd->add_option("--threads", est.threads, "Worker threads")->capture_default_str();
  est_cmd->add_option("--sir-gamma", est.gamma, "SIR recovery probability");
  est_cmd->add_option("--seeds", est.seeds, "Override infected nodes")->delimiter(',');
  est_cmd->callback([&] { code = RunEstimate(est); });

  OracleArgs orc;
  auto* orc_cmd = app.add_subcommand("oracle", "Exact enumeration on tiny graphs");
  orc_cmd->add_option("--fixture", orc.fixture, "counterexample-a or counterexample-b");
  orc_cmd->add_option("--a", orc.a, "Leaf count of counterexample-b")->capture_default_str();
  orc_cmd->add_option("--graph", orc.graph, "Graph file");
  orc_cmd->add_option("--k", orc.k, "Budget")->capture_default_str();
  auto* removed_opt =
      orc_cmd->add_option("--removed", orc.removed, "Exact pi of this set")->delimiter(',');
  orc_cmd->callback([&] {
    orc.has_removed = removed_opt->count() > 0;
    code = RunOracle(orc);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kSizeCap ? kExitSizeCap : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return code;
}
