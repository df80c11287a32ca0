#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qaoace/knapsack.hpp"
#include "qaoace/qaoa.hpp"
#include "qaoace/random.hpp"

namespace qaoace {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Cross-entropy settings. Defaults are the reference parameterization:
/// G = 10, n = 100, rho = 0.1, learning rate 0.5, variance floor 0.1,
/// mu_0 = 0, sigma_0^2 = 1, B in [0.1, 10], A - B*max(c) in [0.1, 10].
struct CeConfig {
  std::size_t generations = 10;
  std::size_t population = 100;
  double elite_fraction = 0.1;
  double learning_rate = 0.5;
  double min_variance = 0.1;
  double initial_mean = 0.0;
  double initial_variance = 1.0;
  Interval range_b{0.1, 10.0};
  Interval range_a_offset{0.1, 10.0};
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // fitness evaluations in flight per generation

  /// ceil(population * elite_fraction).
  std::size_t elite_count() const;
  /// Throws InvalidArgument on out-of-range settings.
  void validate() const;
};

/// Independent per-coordinate Gaussian parameters (diagonal covariance).
struct CeDistribution {
  std::vector<double> mean;
  std::vector<double> variance;

  static CeDistribution initial(std::size_t dims, const CeConfig& config);
  std::size_t dims() const noexcept { return mean.size(); }

  friend bool operator==(const CeDistribution&, const CeDistribution&) = default;
};

struct CeGeneration {
  CeDistribution before;
  CeDistribution after;
  std::vector<std::vector<double>> samples;
  std::vector<double> fitness;
  std::vector<std::size_t> elites;  // sample indices, best first

  friend bool operator==(const CeGeneration&, const CeGeneration&) = default;
};

struct CeTrace {
  std::vector<CeGeneration> generations;

  friend bool operator==(const CeTrace&, const CeTrace&) = default;
};

/// Identifies one fitness evaluation. `seed` is a child of the master seed
/// keyed by (generation, index), independent of evaluation order.
struct SampleContext {
  std::size_t generation = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
};

using CeSampler = std::function<std::vector<double>(const CeDistribution&, Rng&)>;
using CeFitness = std::function<double(std::span<const double>, const SampleContext&)>;

struct CeResult {
  std::vector<double> best_sample;
  double best_fitness = 0.0;
  std::size_t best_generation = 0;
  std::size_t best_index = 0;
  CeTrace trace;
};

/// Smoothed maximum-likelihood refit on the elites. Per coordinate the MLE
/// mean and population variance of the elites are blended with the previous
/// values, new = (1 - lr) * old + lr * mle, and the variance is then raised
/// to at least min_variance. Throws InvalidArgument for an empty elite set.
CeDistribution update_distribution(std::span<const std::vector<double>> elites,
                                   const CeDistribution& previous, const CeConfig& config);

/// Maximizing cross-entropy loop. Each generation draws `population`
/// samples, scores them, stably sorts by descending fitness (ties keep the
/// lower index), refits on the top elite_count() and records everything.
/// Returns the best sample over the whole run; the earliest wins ties.
/// Sample i of generation g draws from Rng(derive_seed(seed, {g, i, 0})) and
/// is scored with context seed derive_seed(seed, {g, i, 1}), so results do
/// not depend on `threads`.
CeResult ce_generic(const CeFitness& fitness, const CeSampler& sampler, std::size_t dims,
                    const CeConfig& config);

/// Sampler for a box of independent truncated normals.
CeSampler truncated_normal_box_sampler(std::vector<Interval> box);

// Penalty search. Coordinates are [A, B].
inline constexpr std::size_t kCoordA = 0;
inline constexpr std::size_t kCoordB = 1;

/// Draws B from the truncated normal on range_b, then A on
/// [B*max(c) + range_a_offset.lo, B*max(c) + range_a_offset.hi].
PenaltyPair sample_penalty_pair(const KnapsackInstance& instance, const CeDistribution& dist,
                                const CeConfig& config, Rng& rng);

/// QAOA figures kept for every evaluated penalty pair.
struct QaoaOutcome {
  double approximation_ratio = 0.0;
  double best_expectation = 0.0;
  std::size_t evaluations_used = 0;
  std::uint64_t seed = 0;
};

struct PenaltyCeResult {
  PenaltyPair best;
  double best_fitness = 0.0;
  CeTrace trace;
  std::vector<std::vector<QaoaOutcome>> outcomes;  // [generation][sample]
};

/// Cross-entropy over penalty pairs; fitness is run_qaoa's approximation
/// ratio for the pair.
PenaltyCeResult ce_penalty_optimize(const KnapsackInstance& instance, std::size_t depth,
                                    const OptimizerConfig& optimizer, const CeConfig& config,
                                    const RatioMode& mode);

/// {"coordinates": [...], "generations": [{"generation", "before", "after",
///  "samples", "fitness", "elites"}]}.
nlohmann::json trace_to_json(const CeTrace& trace, const std::vector<std::string>& coordinates);

/// "generation,sample_index,<coordinates...>,fitness,is_elite" rows.
void write_trace_csv(std::ostream& os, const CeTrace& trace,
                     const std::vector<std::string>& coordinates);

}  // namespace qaoace
