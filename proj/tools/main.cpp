// Command-line front end for the loslap library: simulation, streaming,
// noisy and adaptive jobs, traversal-plan tooling, and cost tables.
//
// Exit codes: 0 success, 2 validation error, 3 budget refusal.

#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loslap/adaptive.hpp"
#include "loslap/costmodel.hpp"
#include "loslap/io.hpp"
#include "loslap/lattice.hpp"
#include "loslap/noise.hpp"
#include "loslap/permanent.hpp"
#include "loslap/slos.hpp"
#include "loslap/steiner.hpp"

namespace {

using namespace loslap;

constexpr double kUnitarityTolerance = 1e-9;

struct Config {
  std::string matrix_path;
  std::uint64_t haar_seed = 0;
  bool have_seed = false;
  int m = 0;
  int n = 0;
  std::string engine = "loslap";
  std::string baseline = "permanent";
  std::string plan_path;
  std::string policy_path;
  std::string output_path;
  std::string groups_text;
  bool sorted = false;
  bool doubled = false;
  bool require_unitary = false;
  bool greedy = false;
  std::uint64_t limit = 0;
  double eta = 0.0;
  bool have_eta = false;
  int k = 0;
  int n_min = 1;
  int n_max = 0;
  int m_min = 1;
  int m_max = 0;
  std::uint64_t budget_memory_bytes = 8ull << 30;
  double budget_flops_per_second = 1e9;
  double budget_wall_seconds = 86400.0;
};

std::uint64_t memory_cap_bytes() {
  const char* env = std::getenv("LOSLAP_MEMORY_CAP_BYTES");
  if (env == nullptr) return kDefaultMemoryCapBytes;
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(env, &used);
    if (used != std::string(env).size() || value == 0) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("LOSLAP_MEMORY_CAP_BYTES must be a positive byte count, got '" +
                                std::string(env) + "'");
  }
}

// Exactly one matrix source; Haar seeds need an explicit mode count.
ComplexMatrix input_matrix(const Config& cfg) {
  if (cfg.have_seed == !cfg.matrix_path.empty()) {
    throw std::invalid_argument("exactly one of --matrix and --haar-seed is required");
  }
  ComplexMatrix u;
  if (cfg.have_seed) {
    if (cfg.m < 1) throw std::invalid_argument("--haar-seed needs --m >= 1");
    u = haar_random_unitary(cfg.m, cfg.haar_seed);
  } else {
    u = load_matrix(cfg.matrix_path);
  }
  if (cfg.require_unitary) {
    const double deviation = unitarity_deviation(u);
    if (deviation > kUnitarityTolerance) {
      std::ostringstream msg;
      msg << "--require-unitary: matrix deviates from unitarity by " << deviation
          << " (tolerance " << kUnitarityTolerance << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  return u;
}

PhotonGroups parse_groups(const std::string& text, int n) {
  PhotonGroups groups;
  std::istringstream stream(text);
  std::string part;
  while (std::getline(stream, part, '|')) {
    std::vector<int> group;
    std::istringstream inner(part);
    std::string token;
    while (std::getline(inner, token, ',')) {
      try {
        std::size_t used = 0;
        group.push_back(std::stoi(token, &used));
        if (used != token.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("--groups: bad photon index '" + token + "'");
      }
    }
    groups.push_back(std::move(group));
  }
  if (groups.empty()) throw std::invalid_argument("--groups must name at least one group");
  (void)n;
  return groups;
}

// Stdout unless --output names a file.
class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string quote_state(const FockState& s) {
  std::string text = "\"";
  for (int i = 0; i < s.modes(); ++i) {
    if (i > 0) text += ',';
    text += std::to_string(s[i]);
  }
  return text + "\"";
}

void emit_amplitude(std::ostream& out, const FockState& s, cplx a) {
  out << quote_state(s) << ',' << format_double(a.real()) << ',' << format_double(a.imag())
      << ',' << format_double(std::norm(a)) << '\n';
}

void emit_probability(std::ostream& out, const FockState& s, int photons, double p) {
  out << quote_state(s) << ',' << photons << ',' << format_double(p) << '\n';
}

struct EngineRun {
  std::map<FockState, cplx> amplitudes;
  std::uint64_t complex_ops = 0;
};

TraversalPlan plan_for_engine(const Config& cfg) {
  if (cfg.plan_path.empty()) {
    throw std::invalid_argument("--engine steiner-plan needs --plan");
  }
  TraversalPlan plan = load_plan(cfg.plan_path);
  if (cfg.n != 0 && cfg.n != plan.n) {
    throw std::invalid_argument("--n disagrees with the plan's photon count " +
                                std::to_string(plan.n));
  }
  return plan;
}

EngineRun run_engine(const std::string& engine, const ComplexMatrix& u, const Config& cfg) {
  const std::uint64_t cap = memory_cap_bytes();
  EngineRun run;
  if (engine == "loslap") {
    TraversalStats stats;
    iterate_amplitudes(
        u, cfg.n,
        [&](const FockState& s, cplx a) {
          run.amplitudes.emplace(s, a);
          return true;
        },
        cap, &stats);
    run.complex_ops = stats.complex_ops;
  } else if (engine == "slos") {
    const SlosResult result = slos_full(u, cfg.n, cap);
    std::size_t index = 0;
    for_each_fock_state(result.m, result.n, [&](const FockState& s) {
      run.amplitudes.emplace(s, result.amplitudes[index++]);
      return true;
    });
    run.complex_ops = result.complex_ops;
  } else if (engine == "permanent") {
    run.amplitudes = full_distribution_naive(u, cfg.n, &run.complex_ops);
  } else if (engine == "steiner-plan") {
    const TraversalPlan plan = plan_for_engine(cfg);
    const PlanExecutionStats stats = execute_plan(
        u, plan,
        [&](const FockState& s, cplx a) {
          run.amplitudes.emplace(s, a);
          return true;
        },
        cap);
    run.complex_ops = stats.complex_ops;
  } else {
    throw std::invalid_argument("unknown engine '" + engine + "'");
  }
  return run;
}

int cmd_simulate(const Config& cfg) {
  const ComplexMatrix u = input_matrix(cfg);
  OutputStream out(cfg.output_path);
  if (cfg.doubled) {
    // two photons per input mode; amplitudes come back state-sorted
    for (const auto& [s, a] : multiphoton_distribution(u, cfg.n, true, memory_cap_bytes())) {
      emit_amplitude(out.get(), s, a);
    }
    return 0;
  }
  if (cfg.engine == "loslap" && !cfg.sorted) {
    // stream leaves as the traversal produces them
    iterate_amplitudes(
        u, cfg.n,
        [&](const FockState& s, cplx a) {
          emit_amplitude(out.get(), s, a);
          return true;
        },
        memory_cap_bytes());
    return 0;
  }
  const EngineRun run = run_engine(cfg.engine, u, cfg);
  for (const auto& [s, a] : run.amplitudes) emit_amplitude(out.get(), s, a);
  return 0;
}

int cmd_iterate(const Config& cfg) {
  const ComplexMatrix u = input_matrix(cfg);
  OutputStream out(cfg.output_path);
  std::uint64_t produced = 0;
  iterate_amplitudes(
      u, cfg.n,
      [&](const FockState& s, cplx a) {
        emit_amplitude(out.get(), s, a);
        return cfg.limit == 0 || ++produced < cfg.limit;
      },
      memory_cap_bytes());
  return 0;
}

int cmd_lossy(const Config& cfg) {
  const ComplexMatrix u = input_matrix(cfg);
  if (cfg.have_eta == !cfg.groups_text.empty()) {
    throw std::invalid_argument("exactly one of --eta and --groups is required");
  }
  OutputStream out(cfg.output_path);
  if (cfg.have_eta) {
    iterate_lossy(
        u, cfg.n, cfg.eta,
        [&](const FockState& s, int photons, double p) {
          emit_probability(out.get(), s, photons, p);
          return true;
        },
        memory_cap_bytes());
    return 0;
  }
  const PhotonGroups groups = parse_groups(cfg.groups_text, cfg.n);
  for (const auto& [s, p] : distinguishable_distribution(u, cfg.n, groups, memory_cap_bytes())) {
    emit_probability(out.get(), s, s.photons(), p);
  }
  return 0;
}

int cmd_adaptive(const Config& cfg) {
  const ComplexMatrix u = input_matrix(cfg);
  if (cfg.policy_path.empty()) throw std::invalid_argument("--policy is required");
  const AdaptivePolicy policy = load_policy(cfg.policy_path);
  validate_policy(policy, cfg.n, static_cast<int>(u.rows()));
  OutputStream out(cfg.output_path);
  iterate_amplitudes_adaptive(
      u, cfg.n, policy,
      [&](const FockState& s, cplx a) {
        emit_amplitude(out.get(), s, a);
        return true;
      },
      memory_cap_bytes());
  return 0;
}

int cmd_steiner_optimize(const Config& cfg) {
  const PartitionGraph g = build_partition_graph(cfg.n, cfg.m);
  const TraversalPlan plan = cfg.greedy ? solve_greedy(g) : solve_exact(g);
  OutputStream out(cfg.output_path);
  out.get() << plan_to_json_text(plan) << '\n';
  return 0;
}

int cmd_steiner_execute(const Config& cfg) {
  const ComplexMatrix u = input_matrix(cfg);
  const TraversalPlan plan = load_plan(cfg.plan_path);
  OutputStream out(cfg.output_path);
  if (cfg.sorted) {
    std::map<FockState, cplx> buffered;
    execute_plan(
        u, plan,
        [&](const FockState& s, cplx a) {
          buffered.emplace(s, a);
          return true;
        },
        memory_cap_bytes());
    for (const auto& [s, a] : buffered) emit_amplitude(out.get(), s, a);
    return 0;
  }
  execute_plan(
      u, plan,
      [&](const FockState& s, cplx a) {
        emit_amplitude(out.get(), s, a);
        return true;
      },
      memory_cap_bytes());
  return 0;
}

int cmd_steiner_export(const Config& cfg) {
  const PartitionGraph g = build_partition_graph(cfg.n, cfg.m);
  OutputStream out(cfg.output_path);
  export_stp(g, out.get());
  return 0;
}

void emit_cost_row(std::ostream& out, Method method, int n, int m, int k) {
  const CostReport report = cost_report(method, n, m, k);
  out << method_name(method) << ',' << n << ',' << m << ','
      << (method == Method::slos_mask ? std::to_string(k) : std::string()) << ','
      << report.flops.get_str() << ',' << report.memory_slots.get_str() << '\n';
}

int cmd_cost_table(const Config& cfg) {
  OutputStream out(cfg.output_path);
  out.get() << "method,n,m,k,flops,memory_slots\n";
  emit_cost_row(out.get(), Method::permanent_all, cfg.n, cfg.m, 0);
  emit_cost_row(out.get(), Method::slos, cfg.n, cfg.m, 0);
  if (cfg.k > 0) emit_cost_row(out.get(), Method::slos_mask, cfg.n, cfg.m, cfg.k);
  emit_cost_row(out.get(), Method::loslap, cfg.n, cfg.m, 0);
  return 0;
}

int cmd_cost_frontier(const Config& cfg) {
  if (cfg.n_max < cfg.n_min) throw std::invalid_argument("--n-max must be >= --n-min");
  Budget budget;
  budget.memory_bytes = cfg.budget_memory_bytes;
  budget.flops_per_second = cfg.budget_flops_per_second;
  budget.wall_seconds = cfg.budget_wall_seconds;
  OutputStream out(cfg.output_path);
  out.get() << "n,permanent,slos,slos-mask,loslap\n";
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    out.get() << n;
    for (Method method :
         {Method::permanent_all, Method::slos, Method::slos_mask, Method::loslap}) {
      out.get() << ',' << max_modes_within_budget(method, n, budget);
    }
    out.get() << '\n';
  }
  return 0;
}

int cmd_cost_crossover(const Config& cfg) {
  if (cfg.m_max < cfg.m_min) throw std::invalid_argument("--m-max must be >= --m-min");
  OutputStream out(cfg.output_path);
  out.get() << "m,crossover_mask_size,min_mask_for_memory,loslap_dominates\n";
  for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
    out.get() << m << ',' << crossover_mask_size(cfg.n, m) << ','
              << min_mask_for_memory(cfg.n, m, cfg.budget_memory_bytes) << ','
              << (loslap_dominates(cfg.n, m, cfg.budget_memory_bytes) ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_compare(const Config& cfg) {
  const ComplexMatrix u = input_matrix(cfg);
  const EngineRun a = run_engine(cfg.engine, u, cfg);
  const EngineRun b = run_engine(cfg.baseline, u, cfg);
  double max_diff = 0.0;
  for (const auto& [s, amp] : a.amplitudes) {
    const auto it = b.amplitudes.find(s);
    const cplx other = it == b.amplitudes.end() ? cplx(0.0) : it->second;
    max_diff = std::max(max_diff, std::abs(amp - other));
  }
  for (const auto& [s, amp] : b.amplitudes) {
    if (a.amplitudes.count(s) == 0) max_diff = std::max(max_diff, std::abs(amp));
  }
  OutputStream out(cfg.output_path);
  out.get() << "engine_a,engine_b,max_abs_diff,complex_ops_a,complex_ops_b\n";
  out.get() << cfg.engine << ',' << cfg.baseline << ',' << format_double(max_diff) << ','
            << a.complex_ops << ',' << b.complex_ops << '\n';
  return 0;
}

void add_matrix_flags(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--matrix", cfg.matrix_path, "matrix file (.json or .csv)");
  cmd->add_option("--haar-seed", cfg.haar_seed, "draw a Haar-random unitary from this seed")
      ->each([&cfg](const std::string&) { cfg.have_seed = true; });
  cmd->add_option("--m", cfg.m, "mode count for --haar-seed");
  cmd->add_flag("--require-unitary", cfg.require_unitary,
                "reject matrices farther than 1e-9 from unitarity");
}

void add_output_flag(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--output", cfg.output_path, "write here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"exact strong simulation of linear optical circuits"};
  app.require_subcommand(1);

  const auto check_eta = CLI::Validator(
      [](std::string& value) {
        try {
          const double eta = std::stod(value);
          if (eta < 0.0 || eta > 1.0) return std::string("eta must lie in [0,1]");
        } catch (const std::exception&) {
          return std::string("eta must be a number in [0,1]");
        }
        return std::string();
      },
      "ETA");

  CLI::App* simulate = app.add_subcommand("simulate", "full output distribution");
  add_matrix_flags(simulate, cfg);
  add_output_flag(simulate, cfg);
  simulate->add_option("--n", cfg.n, "photon count")->required();
  simulate->add_option("--engine", cfg.engine, "loslap | slos | permanent | steiner-plan");
  simulate->add_option("--plan", cfg.plan_path, "traversal plan for --engine steiner-plan");
  simulate->add_flag("--sort", cfg.sorted, "buffer and sort rows by output state");
  simulate->add_flag("--doubled", cfg.doubled, "two photons in each of the first n modes");

  CLI::App* iterate = app.add_subcommand("iterate", "stream amplitudes lazily");
  add_matrix_flags(iterate, cfg);
  add_output_flag(iterate, cfg);
  iterate->add_option("--n", cfg.n, "photon count")->required();
  iterate->add_option("--limit", cfg.limit, "stop after this many rows (0 = all)");

  CLI::App* lossy = app.add_subcommand("lossy", "distributions under loss or distinguishability");
  add_matrix_flags(lossy, cfg);
  add_output_flag(lossy, cfg);
  lossy->add_option("--n", cfg.n, "photon count")->required();
  lossy->add_option("--eta", cfg.eta, "per-photon loss probability")
      ->check(check_eta)
      ->each([&cfg](const std::string&) { cfg.have_eta = true; });
  lossy->add_option("--groups", cfg.groups_text,
                    "distinguishability classes, e.g. \"1,2|3\" (one-based photons)");

  CLI::App* adaptive = app.add_subcommand("adaptive", "feed-forward simulation");
  add_matrix_flags(adaptive, cfg);
  add_output_flag(adaptive, cfg);
  adaptive->add_option("--n", cfg.n, "photon count")->required();
  adaptive->add_option("--policy", cfg.policy_path, "feed-forward policy JSON")->required();

  CLI::App* steiner = app.add_subcommand("steiner", "traversal-plan tooling");
  steiner->require_subcommand(1);
  CLI::App* optimize = steiner->add_subcommand("optimize", "solve for a cheap traversal plan");
  optimize->add_option("--n", cfg.n, "photon count")->required();
  optimize->add_option("--m", cfg.m, "mode count")->required();
  optimize->add_flag("--greedy", cfg.greedy, "use the greedy heuristic instead of the exact solve");
  add_output_flag(optimize, cfg);
  CLI::App* execute = steiner->add_subcommand("execute", "replay a stored plan");
  add_matrix_flags(execute, cfg);
  add_output_flag(execute, cfg);
  execute->add_option("--plan", cfg.plan_path, "traversal plan JSON")->required();
  execute->add_flag("--sort", cfg.sorted, "buffer and sort rows by output state");
  CLI::App* export_cmd = steiner->add_subcommand("export-stp", "emit the partition graph in STP form");
  export_cmd->add_option("--n", cfg.n, "photon count")->required();
  export_cmd->add_option("--m", cfg.m, "mode count")->required();
  add_output_flag(export_cmd, cfg);

  CLI::App* cost = app.add_subcommand("cost", "closed-form resource counts");
  cost->require_subcommand(1);
  CLI::App* table = cost->add_subcommand("table", "per-method flops and memory at one size");
  table->add_option("--n", cfg.n, "photon count")->required();
  table->add_option("--m", cfg.m, "mode count")->required();
  table->add_option("--k", cfg.k, "mask size; adds the masked-expansion row");
  add_output_flag(table, cfg);
  CLI::App* frontier = cost->add_subcommand("frontier", "largest feasible m per method");
  frontier->add_option("--n-min", cfg.n_min, "first photon count (default 1)");
  frontier->add_option("--n-max", cfg.n_max, "last photon count")->required();
  frontier->add_option("--memory-bytes", cfg.budget_memory_bytes, "memory budget (default 8 GiB)");
  frontier->add_option("--flops-per-second", cfg.budget_flops_per_second,
                       "machine speed (default 1e9)");
  frontier->add_option("--wall-seconds", cfg.budget_wall_seconds, "time budget (default 86400)");
  add_output_flag(frontier, cfg);
  CLI::App* crossover = cost->add_subcommand("crossover", "mask-size crossover and dominance");
  crossover->add_option("--n", cfg.n, "photon count")->required();
  crossover->add_option("--m-min", cfg.m_min, "first mode count (default 1)");
  crossover->add_option("--m-max", cfg.m_max, "last mode count")->required();
  crossover->add_option("--memory-bytes", cfg.budget_memory_bytes,
                        "memory budget for mask admissibility (default 8 GiB)");
  add_output_flag(crossover, cfg);

  CLI::App* compare = app.add_subcommand("compare", "run two engines and report the difference");
  add_matrix_flags(compare, cfg);
  add_output_flag(compare, cfg);
  compare->add_option("--n", cfg.n, "photon count")->required();
  compare->add_option("--engine", cfg.engine, "first engine (default loslap)");
  compare->add_option("--baseline", cfg.baseline, "second engine (default permanent)");
  compare->add_option("--plan", cfg.plan_path, "traversal plan for steiner-plan engines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate) return cmd_simulate(cfg);
    if (*iterate) return cmd_iterate(cfg);
    if (*lossy) return cmd_lossy(cfg);
    if (*adaptive) return cmd_adaptive(cfg);
    if (*optimize) return cmd_steiner_optimize(cfg);
    if (*execute) return cmd_steiner_execute(cfg);
    if (*export_cmd) return cmd_steiner_export(cfg);
    if (*table) return cmd_cost_table(cfg);
    if (*frontier) return cmd_cost_frontier(cfg);
    if (*crossover) return cmd_cost_crossover(cfg);
    if (*compare) return cmd_compare(cfg);
  } catch (const budget_error& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
