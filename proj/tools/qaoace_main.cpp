// qaoace: command-line front end for the knapsack QAOA / cross-entropy tools.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qaoace/cross_entropy.hpp"
#include "qaoace/csv.hpp"
#include "qaoace/errors.hpp"
#include "qaoace/experiment.hpp"
#include "qaoace/instances.hpp"
#include "qaoace/knapsack.hpp"
#include "qaoace/qaoa.hpp"

namespace fs = std::filesystem;
using namespace qaoace;

namespace {

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

struct RatioFlags {
  std::uint64_t shots = 1024;
  bool exact = false;

  RatioMode mode() const { return exact ? RatioMode::exact() : RatioMode::sampled(shots); }
};

void add_ratio_flags(CLI::App* cmd, RatioFlags& flags) {
  auto* shots = cmd->add_option("--shots", flags.shots, "Measurement shots for the ratio")
                    ->capture_default_str()
                    ->check(CLI::PositiveNumber);
  cmd->add_flag("--exact", flags.exact, "Use the exact BKS probability instead of shots")
      ->excludes(shots);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void print_instances() {
  std::cout << "label  weights  values  capacity  qubits\n";
  for (const auto& k : builtin_instances()) {
    std::cout << k.label() << "      [" << join(k.weights()) << "]    [" << join(k.values())
              << "]   " << k.capacity() << "         " << k.qubit_count() << '\n';
  }
}

void print_solution(const std::string& name) {
  const auto inst = resolve_instance(name);
  const auto sol = solve_bruteforce(inst);
  std::cout << "instance " << inst.label() << ": best value " << sol.best_value << '\n';
  for (const auto& packing : sol.best_packings) {
    std::cout << "  items {";
    for (std::size_t i = 0; i < packing.size(); ++i) std::cout << (i ? ", " : "") << packing[i];
    std::cout << "}\n";
  }
  std::cout << "bks " << canonical_bks_bitstring(inst).to_string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalty tuning for QAOA on knapsack instances"};
  app.require_subcommand(1);

  // instances
  app.add_subcommand("instances", "List the built-in instances");

  // solve
  auto* solve = app.add_subcommand("solve", "Brute-force optimum and BKS bitstring");
  std::string solve_instance;
  solve->add_option("instance", solve_instance, "Built-in label or JSON file")->required();

  // qaoa
  auto* qaoa = app.add_subcommand("qaoa", "Optimize angles for one penalty pair");
  std::string qaoa_instance;
  std::size_t qaoa_p = 1;
  double qaoa_a = 0, qaoa_b = 0;
  std::uint64_t qaoa_seed = 0;
  std::size_t qaoa_budget = 200;
  std::string qaoa_output;
  RatioFlags qaoa_ratio;
  qaoa->add_option("instance", qaoa_instance, "Built-in label or JSON file")->required();
  qaoa->add_option("--p", qaoa_p, "Circuit depth")->capture_default_str()->check(
      CLI::PositiveNumber);
  qaoa->add_option("--A", qaoa_a, "Constraint penalty weight")->required();
  qaoa->add_option("--B", qaoa_b, "Objective weight")->required();
  qaoa->add_option("--seed", qaoa_seed, "Seed")->capture_default_str();
  qaoa->add_option("--budget", qaoa_budget, "Objective evaluations")->capture_default_str();
  qaoa->add_option("--output", qaoa_output, "Write the optimizer trace CSV here (p = 1)");
  add_ratio_flags(qaoa, qaoa_ratio);

  // ce
  auto* ce = app.add_subcommand("ce", "Cross-entropy search over (A, B)");
  std::string ce_instance;
  std::size_t ce_p = 1;
  std::uint64_t ce_seed = 0;
  std::size_t ce_budget = 200;
  std::string ce_output;
  CeConfig ce_config;
  RatioFlags ce_ratio;
  ce->add_option("instance", ce_instance, "Built-in label or JSON file")->required();
  ce->add_option("--p", ce_p, "Circuit depth")->capture_default_str()->check(CLI::PositiveNumber);
  ce->add_option("--seed", ce_seed, "Seed")->capture_default_str();
  ce->add_option("--budget", ce_budget, "Objective evaluations per QAOA run")
      ->capture_default_str();
  ce->add_option("--generations", ce_config.generations)->capture_default_str();
  ce->add_option("--population", ce_config.population)->capture_default_str();
  ce->add_option("--elite-fraction", ce_config.elite_fraction)->capture_default_str();
  ce->add_option("--learning-rate", ce_config.learning_rate)->capture_default_str();
  ce->add_option("--min-variance", ce_config.min_variance)->capture_default_str();
  ce->add_option("--threads", ce_config.threads)->capture_default_str();
  ce->add_option("--output", ce_output, "Directory for trace.csv and trace.json");
  add_ratio_flags(ce, ce_ratio);

  // bench
  auto* bench = app.add_subcommand("bench", "Random vs cross-entropy penalty benchmark");
  std::string bench_config_path;
  std::optional<std::uint64_t> bench_seed;
  std::optional<std::string> bench_output, bench_mode, bench_scheme;
  std::optional<std::uint64_t> bench_shots;
  std::optional<std::size_t> bench_threads, bench_budget;
  bool bench_exact = false;
  bench->add_option("--config", bench_config_path, "JSON config (defaults if omitted)")
      ->check(CLI::ExistingFile);
  bench->add_option("--seed", bench_seed, "Master seed");
  bench->add_option("--output", bench_output, "Output directory");
  bench->add_option("--mode", bench_mode, "random, ce or both");
  bench->add_option("--random-scheme", bench_scheme, "initial or uniform");
  bench->add_option("--threads", bench_threads, "Worker threads");
  bench->add_option("--budget", bench_budget, "Objective evaluations per QAOA run");
  auto* bench_shots_opt = bench->add_option("--shots", bench_shots, "Measurement shots");
  bench->add_flag("--exact", bench_exact, "Exact BKS probability")->excludes(bench_shots_opt);

  // landscape
  auto* land = app.add_subcommand("landscape", "Depth-1 expectation grid");
  std::string land_instance;
  double land_a = 0, land_b = 0;
  std::size_t land_grid = 100;
  bool land_overlay = false;
  std::uint64_t land_seed = 0;
  std::size_t land_budget = 200;
  std::string land_output = "landscape.csv";
  land->add_option("instance", land_instance, "Built-in label or JSON file")->required();
  land->add_option("--A", land_a, "Constraint penalty weight")->required();
  land->add_option("--B", land_b, "Objective weight")->required();
  land->add_option("--grid", land_grid, "Points per axis")->capture_default_str();
  land->add_flag("--overlay", land_overlay, "Also write the optimizer trace");
  land->add_option("--seed", land_seed, "Seed for the overlay run")->capture_default_str();
  land->add_option("--budget", land_budget, "Evaluations for the overlay run")
      ->capture_default_str();
  land->add_option("--output", land_output, "Grid CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (app.got_subcommand("instances")) {
      print_instances();
    } else if (app.got_subcommand(solve)) {
      print_solution(solve_instance);
    } else if (app.got_subcommand(qaoa)) {
      const auto inst = resolve_instance(qaoa_instance);
      const PenaltyPair pair{qaoa_a, qaoa_b};
      OptimizerConfig opt;
      opt.evaluation_budget = qaoa_budget;
      opt.keep_trace = !qaoa_output.empty();
      const auto r = run_qaoa(inst, pair, qaoa_p, opt, qaoa_ratio.mode(), qaoa_seed);
      std::cout << "instance " << inst.label() << " p=" << qaoa_p << " A=" << format_double(qaoa_a)
                << " B=" << format_double(qaoa_b) << '\n'
                << "best angles " << r.best_params << '\n'
                << "best expectation " << format_double(r.best_expectation) << '\n'
                << "evaluations " << r.evaluations_used << '\n'
                << "approximation ratio " << format_double(r.approximation_ratio) << '\n';
      if (!qaoa_output.empty()) {
        auto out = open_output(qaoa_output);
        write_trace_csv(out, r.trace);
      }
    } else if (app.got_subcommand(ce)) {
      const auto inst = resolve_instance(ce_instance);
      OptimizerConfig opt;
      opt.evaluation_budget = ce_budget;
      ce_config.seed = ce_seed;
      const auto r = ce_penalty_optimize(inst, ce_p, opt, ce_config, ce_ratio.mode());
      const auto& last = r.trace.generations.back();
      std::cout << "instance " << inst.label() << " p=" << ce_p << '\n'
                << "best A=" << format_double(r.best.a) << " B=" << format_double(r.best.b)
                << " ratio " << format_double(r.best_fitness) << '\n'
                << "final mean A=" << format_double(last.after.mean[kCoordA])
                << " B=" << format_double(last.after.mean[kCoordB]) << '\n';
      if (!ce_output.empty()) {
        const fs::path dir(ce_output);
        auto csv = open_output(dir / "trace.csv");
        write_trace_csv(csv, r.trace, {"A", "B"});
        auto js = open_output(dir / "trace.json");
        js << trace_to_json(r.trace, {"A", "B"}).dump(2) << '\n';
      }
    } else if (app.got_subcommand(bench)) {
      ExperimentConfig config;
      if (!bench_config_path.empty()) {
        std::ifstream in(bench_config_path);
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw InvalidArgument("cannot parse '" + bench_config_path + "': " + e.what());
        }
        config = experiment_config_from_json(j);
      }
      if (bench_seed) config.seed = *bench_seed;
      if (bench_output) config.output = *bench_output;
      if (bench_mode) config.mode = bench_mode_from_string(*bench_mode);
      if (bench_scheme) {
        config = experiment_config_from_json({{"random_scheme", *bench_scheme}}, config);
      }
      if (bench_threads) config.threads = *bench_threads;
      if (bench_budget) config.optimizer.evaluation_budget = *bench_budget;
      if (bench_shots) config.ratio = RatioMode::sampled(*bench_shots);
      if (bench_exact) config.ratio = RatioMode::exact();
      config.validate();

      const auto report = run_benchmark(config);
      write_benchmark_artifacts(report, config.output);
      std::cout << report.records.size() << " records written to " << config.output << '\n';
      for (const auto& c : report.summary["comparisons"]) {
        std::cout << "  " << c["instance"].get<std::string>() << " p=" << c["p"].get<int>()
                  << " random " << format_double(c["random_mean"].get<double>()) << " ce "
                  << format_double(c["ce_mean"].get<double>()) << '\n';
      }
    } else if (app.got_subcommand(land)) {
      const auto inst = resolve_instance(land_instance);
      const auto diagonal = build_diagonal(inst, PenaltyPair{land_a, land_b});
      const auto grid = landscape_scan(diagonal, land_grid);
      {
        auto out = open_output(land_output);
        write_landscape_csv(out, grid);
      }
      std::cout << "grid minimum " << format_double(grid.min_value) << " at beta "
                << format_double(grid.beta_axis[grid.argmin_beta]) << " gamma "
                << format_double(grid.gamma_axis[grid.argmin_gamma]) << '\n';
      if (land_overlay) {
        OptimizerConfig opt;
        opt.evaluation_budget = land_budget;
        opt.keep_trace = true;
        const auto r = optimize_angles(diagonal, 1, opt, land_seed);
        fs::path trace_path(land_output);
        trace_path.replace_filename(trace_path.stem().string() + "_trace.csv");
        auto out = open_output(trace_path);
        write_trace_csv(out, r.trace);
        std::cout << "optimizer best " << format_double(r.best_expectation) << ", trace in "
                  << trace_path.string() << '\n';
      }
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return 0;
}
