#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qaoace/cross_entropy.hpp"
#include "qaoace/knapsack.hpp"
#include "qaoace/qaoa.hpp"

namespace qaoace {

enum class BenchMode { kRandom, kCe, kBoth };

/// How baseline ("random") penalty pairs are drawn.
enum class RandomPairScheme {
  kInitialDistribution,  // B then A from the CE starting distribution
  kUniform,              // B uniform on range_b, then A uniform on its range
};

struct ExperimentConfig {
  std::vector<std::string> instances{"A", "B", "C", "D", "E"};  // labels or JSON paths
  std::vector<std::size_t> depths{1, 2, 3};
  BenchMode mode = BenchMode::kBoth;
  std::size_t random_pairs = 5;
  std::size_t runs_per_pair = 10;
  RatioMode ratio{1024};
  RandomPairScheme random_scheme = RandomPairScheme::kInitialDistribution;
  bool reevaluate_ce = false;
  std::uint64_t seed = 0;
  std::string output = "bench_out";
  CeConfig ce{};
  OptimizerConfig optimizer{};
  std::size_t threads = 1;  // never changes results

  /// Throws InvalidArgument for an empty instance or depth list, a zero
  /// depth, or invalid nested configs.
  void validate() const;
};

std::string to_string(BenchMode mode);
BenchMode bench_mode_from_string(const std::string& text);

/// Field-wise overlay: keys present in `j` replace the matching members of
/// `base`. Unknown keys are rejected with InvalidArgument.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
/// All result-affecting fields (threads is omitted).
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

struct RunRecord {
  std::string instance;
  std::size_t p = 0;
  std::string mode;  // "random" or "ce"
  std::size_t pair_index = 0;
  std::size_t run_index = 0;
  double a = 0.0;
  double b = 0.0;
  double approximation_ratio = 0.0;
  double best_expectation = 0.0;
  std::size_t evaluations_used = 0;
  std::uint64_t seed = 0;
};

/// Seed of one (instance, depth, mode) group under the master seed.
std::uint64_t group_seed(std::uint64_t master, const std::string& instance, std::size_t depth,
                         const std::string& mode);

/// `random_pairs` baseline pairs, each run `runs_per_pair` times.
std::vector<RunRecord> run_random_mode(const KnapsackInstance& instance, std::size_t depth,
                                       const ExperimentConfig& config);

/// Penalty CE, then one record per elite of the final generation, best first.
std::vector<RunRecord> run_ce_mode(const KnapsackInstance& instance, std::size_t depth,
                                   const ExperimentConfig& config);

/// Box-plot figures; quartiles by linear interpolation between order
/// statistics.
struct BoxStats {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;

  double iqr() const noexcept { return q3 - q1; }
};

/// Throws InvalidArgument for an empty sample.
BoxStats box_stats(std::span<const double> values);

struct BenchmarkReport {
  std::vector<RunRecord> records;
  nlohmann::json summary;
};

/// Instance x depth x mode matrix in fixed order. The summary holds the
/// config, per-group BoxStats and mean(ce) / mean(random) per (instance, p).
BenchmarkReport run_benchmark(const ExperimentConfig& config);

void write_records_csv(std::ostream& os, std::span<const RunRecord> records);

/// Writes records.csv and summary.json under `dir`, creating it if needed.
/// Throws IoError naming the failing path.
void write_benchmark_artifacts(const BenchmarkReport& report, const std::filesystem::path& dir);

}  // namespace qaoace
