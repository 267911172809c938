// Command-line front end: enumeration, exact kernel dumps, chain simulation,
// property suites and stationary distributions, with deterministic seeded
// output. Identical (config, seed) pairs produce identical output bytes.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "cpab/ab.hpp"
#include "cpab/analysis.hpp"
#include "cpab/enumerate.hpp"
#include "cpab/json_io.hpp"
#include "cpab/mass.hpp"
#include "cpab/weighted.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfigError = 2;
constexpr int kExitSuiteFailure = 3;

cpab::MixtureMeasure load_nu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open nu config: " + path);
  json j;
  in >> j;
  return cpab::nu_from_json(j);
}

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::runtime_error("cannot open output file: " + path);
      stream = file.get();
    }
  }
  std::ostream& out() { return *stream; }
};

cpab::FragmentationTree initial_tree(const std::string& init_path, int n) {
  if (init_path.empty()) return cpab::FragmentationTree::caterpillar(cpab::range_set(n));
  std::ifstream in(init_path);
  if (!in) throw std::runtime_error("cannot open init file: " + init_path);
  json j;
  in >> j;
  return cpab::tree_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov chains on set partitions and fragmentation trees"};
  app.require_subcommand(1);

  std::string object_kind;
  std::string level = "tree";
  std::string nu_path;
  std::string output_path;
  std::string init_path;
  std::string format = "json";
  std::string suite_name;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  long steps = -1;
  double lambda = 1.0;
  double horizon = -1.0;
  double theta = 1.0;
  int depth = 4;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "64-bit seed (default from CPAB_SEED, else 0)")
        ->envname("CPAB_SEED");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", output_path, "write to file instead of stdout");
  };

  CLI::App* enumerate = app.add_subcommand("enumerate", "list partitions or trees");
  enumerate->add_option("--object", object_kind, "partitions|trees")->required();
  enumerate->add_option("--n", n, "ground set size")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--k", k, "block/degree bound (0 = unbounded)");
  add_output(enumerate);

  CLI::App* kernel_cmd = app.add_subcommand("kernel", "exact transition matrix dump");
  kernel_cmd->add_option("--level", level, "partition|tree")->required();
  kernel_cmd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--nu", nu_path, "mixture config JSON")->required();
  add_output(kernel_cmd);

  CLI::App* chain = app.add_subcommand("chain", "discrete branching chain (JSON lines)");
  chain->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  chain->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  chain->add_option("--nu", nu_path)->required();
  chain->add_option("--steps", steps)->required()->check(CLI::NonNegativeNumber);
  chain->add_option("--init", init_path, "initial tree JSON (default: caterpillar)");
  add_seed(chain);
  add_output(chain);

  CLI::App* ct_chain = app.add_subcommand("ct-chain", "continuous-time chain (jump/hold)");
  ct_chain->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  ct_chain->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  ct_chain->add_option("--nu", nu_path)->required();
  ct_chain->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
  ct_chain->add_option("--horizon", horizon)->required()->check(CLI::PositiveNumber);
  ct_chain->add_option("--init", init_path);
  add_seed(ct_chain);
  add_output(ct_chain);

  CLI::App* poisson_chain = app.add_subcommand("poisson-chain", "Poissonian construction path");
  poisson_chain->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  poisson_chain->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  poisson_chain->add_option("--nu", nu_path)->required();
  poisson_chain->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
  poisson_chain->add_option("--horizon", horizon)->required()->check(CLI::PositiveNumber);
  poisson_chain->add_option("--init", init_path);
  add_seed(poisson_chain);
  add_output(poisson_chain);

  CLI::App* mass_chain = app.add_subcommand("mass-chain", "mass fragmentation chain");
  mass_chain->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  mass_chain->add_option("--nu", nu_path)->required();
  mass_chain->add_option("--depth", depth)->check(CLI::PositiveNumber);
  mass_chain->add_option("--steps", steps, "discrete chain length");
  mass_chain->add_option("--lambda", lambda, "atom rate (continuous-time variant)");
  mass_chain->add_option("--horizon", horizon, "time horizon (continuous-time variant)");
  mass_chain->add_option("--init", init_path, "initial mass tree JSON (default: root only)");
  add_seed(mass_chain);
  add_output(mass_chain);

  CLI::App* weighted_chain = app.add_subcommand("weighted-chain", "weighted tree chain");
  weighted_chain->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  weighted_chain->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  weighted_chain->add_option("--nu", nu_path)->required();
  weighted_chain->add_option("--theta", theta)->required()->check(CLI::PositiveNumber);
  weighted_chain->add_option("--steps", steps)->required()->check(CLI::NonNegativeNumber);
  weighted_chain->add_option("--format", format, "json|newick");
  weighted_chain->add_option("--init", init_path);
  add_seed(weighted_chain);
  add_output(weighted_chain);

  CLI::App* check = app.add_subcommand("check", "run a property suite");
  check->add_option("--suite", suite_name,
                    "row_sums|exchangeability|consistency|stationarity|recursion_equiv")
      ->required();
  check->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  check->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  check->add_option("--nu", nu_path)->required();
  check->add_option("--format", format, "json|text");
  add_output(check);

  CLI::App* stationary_cmd = app.add_subcommand("stationary", "stationary distribution dump");
  stationary_cmd->add_option("--level", level, "partition|tree")->required();
  stationary_cmd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  stationary_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  stationary_cmd->add_option("--nu", nu_path)->required();
  add_output(stationary_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    Output output(output_path);
    std::ostream& out = output.out();

    if (*enumerate) {
      const auto bound = k > 0 ? static_cast<std::size_t>(k) : cpab::kUnbounded;
      json list = json::array();
      if (object_kind == "partitions") {
        for (const auto& p : cpab::enumerate_partitions(n, bound)) {
          list.push_back(cpab::partition_to_json(p));
        }
      } else if (object_kind == "trees") {
        for (const auto& t : cpab::enumerate_trees(n, bound)) {
          list.push_back(cpab::tree_to_json(t));
        }
      } else {
        throw std::runtime_error("--object must be partitions or trees");
      }
      out << list.dump() << "\n";
    } else if (*kernel_cmd) {
      const auto nu = load_nu(nu_path);
      if (level == "partition") {
        out << cpab::matrix_to_json(cpab::cp_matrix(n, k, nu)).dump() << "\n";
      } else if (level == "tree") {
        out << cpab::matrix_to_json(cpab::ab_matrix(n, cpab::cp_ab_kernel(nu, k))).dump() << "\n";
      } else {
        throw std::runtime_error("--level must be partition or tree");
      }
    } else if (*chain) {
      const auto nu = load_nu(nu_path);
      const auto kernel = cpab::cp_ab_kernel(nu, k);
      cpab::FragmentationTree state = initial_tree(init_path, n);
      cpab::Rng rng(cpab::derive_seed(seed, "chain"));
      out << json{{"step", 0}, {"tree", cpab::tree_to_json(state)}}.dump() << "\n";
      for (long i = 1; i <= steps; ++i) {
        state = cpab::ab_sample(state, kernel, rng);
        out << json{{"step", i}, {"tree", cpab::tree_to_json(state)}}.dump() << "\n";
      }
    } else if (*ct_chain) {
      const auto nu = load_nu(nu_path);
      cpab::Rng rng(cpab::derive_seed(seed, "ct-chain"));
      const auto path = cpab::ct_simulate(initial_tree(init_path, n), cpab::cp_ab_kernel(nu, k),
                                          {lambda, horizon}, rng);
      for (const auto& [t, tree] : path.states) {
        out << json{{"time", t}, {"tree", cpab::tree_to_json(tree)}}.dump() << "\n";
      }
    } else if (*poisson_chain) {
      const auto nu = load_nu(nu_path);
      const auto path =
          cpab::poisson_simulate(initial_tree(init_path, n), nu, k, lambda, horizon, seed);
      for (const auto& [t, tree] : path.states) {
        out << json{{"time", t}, {"tree", cpab::tree_to_json(tree)}}.dump() << "\n";
      }
    } else if (*mass_chain) {
      const auto nu = load_nu(nu_path);
      const bool discrete = steps >= 0;
      const bool timed = horizon > 0.0;
      if (discrete == timed) {
        throw std::runtime_error("mass-chain: give exactly one of --steps or --horizon");
      }
      cpab::MassFragmentation state = cpab::MassFragmentation::root_only();
      if (!init_path.empty()) {
        std::ifstream in(init_path);
        if (!in) throw std::runtime_error("cannot open init file: " + init_path);
        json j;
        in >> j;
        state = cpab::mass_from_json(j);
      }
      if (discrete) {
        cpab::Rng rng(cpab::derive_seed(seed, "mass-chain"));
        out << json{{"step", 0}, {"mass", cpab::mass_to_json(state)}}.dump() << "\n";
        for (long i = 1; i <= steps; ++i) {
          state = cpab::mass_step(state, nu, k, depth, rng);
          out << json{{"step", i}, {"mass", cpab::mass_to_json(state)}}.dump() << "\n";
        }
      } else {
        const auto path = cpab::mass_ct_simulate(state, nu, k, lambda, horizon, depth, seed);
        for (const auto& [t, mass] : path.states) {
          out << json{{"time", t}, {"mass", cpab::mass_to_json(mass)}}.dump() << "\n";
        }
      }
    } else if (*weighted_chain) {
      const auto nu = load_nu(nu_path);
      if (format != "json" && format != "newick") {
        throw std::runtime_error("--format must be json or newick");
      }
      cpab::WeightedTree state{initial_tree(init_path, n), {}};
      cpab::Rng rng(cpab::derive_seed(seed, "weighted-chain"));
      for (long i = 1; i <= steps; ++i) {
        state = cpab::weighted_sample(state, nu, k, theta, rng);
        if (format == "newick") {
          out << cpab::to_newick(state) << "\n";
        } else {
          out << json{{"step", i}, {"tree", cpab::weighted_to_json(state)}}.dump() << "\n";
        }
      }
    } else if (*check) {
      const auto nu = load_nu(nu_path);
      const auto report = cpab::run_suite(cpab::suite_from_name(suite_name), n, k, nu);
      if (format == "text") {
        out << cpab::report_text(report) << "\n";
      } else {
        out << cpab::report_to_json(report).dump() << "\n";
      }
      if (!report.pass) return kExitSuiteFailure;
    } else if (*stationary_cmd) {
      const auto nu = load_nu(nu_path);
      json states = json::array();
      Eigen::VectorXd rho;
      if (level == "partition") {
        const auto m = cpab::cp_matrix(n, k, nu);
        rho = cpab::stationary(m);
        for (const auto& s : m.states) states.push_back(cpab::partition_to_json(s));
      } else if (level == "tree") {
        const auto m = cpab::ab_matrix(n, cpab::cp_ab_kernel(nu, k));
        rho = cpab::stationary(m);
        for (const auto& s : m.states) states.push_back(cpab::tree_to_json(s));
      } else {
        throw std::runtime_error("--level must be partition or tree");
      }
      json probs = json::array();
      for (Eigen::Index i = 0; i < rho.size(); ++i) probs.push_back(rho(i));
      out << json{{"states", std::move(states)}, {"probs", std::move(probs)}}.dump() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return 0;
}
