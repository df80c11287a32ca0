#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <vector>

#include "qaoace/knapsack.hpp"
#include "qaoace/statevector.hpp"

namespace qaoace {

/// Closed interval [lo, hi] on one angle axis. Samples drawn by the
/// optimizer stay strictly below hi.
struct AngleBounds {
  double lo = 0.0;
  double hi = 2.0 * std::numbers::pi;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Depth-p angles. Layer k applies the cost propagator with gammas[k], then
/// the driver with betas[k].
struct QaoaParams {
  std::vector<double> betas;
  std::vector<double> gammas;

  static QaoaParams zeros(std::size_t depth);

  std::size_t depth() const noexcept { return betas.size(); }
  /// Throws InvalidArgument when the two angle lists differ in length.
  void validate() const;

  friend bool operator==(const QaoaParams&, const QaoaParams&) = default;
};

std::ostream& operator<<(std::ostream& os, const QaoaParams& params);

/// Settings of the (mu + lambda) evolution strategy used for the angles.
struct OptimizerConfig {
  std::size_t evaluation_budget = 200;
  std::size_t population_size = 20;  // lambda, offspring per generation
  std::size_t elite_count = 5;       // mu, survivors per generation
  double initial_step = 0.1;         // initial sigma as a fraction of each axis width
  AngleBounds beta_bounds{};
  AngleBounds gamma_bounds{};
  bool keep_trace = false;

  /// Throws InvalidArgument unless 1 <= elite_count < population_size <=
  /// evaluation_budget, initial_step > 0 and both bounds have lo < hi.
  void validate() const;
};

struct TraceEntry {
  QaoaParams params;
  double expectation = 0.0;
};

/// How the BKS probability is read off the final state.
struct RatioMode {
  std::uint64_t shots = 1024;  // 0 means exact probability

  static RatioMode exact() noexcept { return RatioMode{0}; }
  static RatioMode sampled(std::uint64_t n) noexcept { return RatioMode{n}; }
  bool is_exact() const noexcept { return shots == 0; }
};

struct QaoaResult {
  QaoaParams best_params;
  double best_expectation = 0.0;
  double approximation_ratio = 0.0;
  std::size_t evaluations_used = 0;
  std::vector<TraceEntry> trace;  // filled only with OptimizerConfig::keep_trace
};

/// Uniform superposition followed by p cost/driver layers.
StateVector prepare_state(const DiagonalHamiltonian& diagonal, const QaoaParams& params);

/// <psi(beta, gamma)| H |psi(beta, gamma)>.
double objective(const DiagonalHamiltonian& diagonal, const QaoaParams& params);

/// Minimizes objective() over the 2p-dimensional angle box with a
/// self-adaptive (mu + lambda) evolution strategy:
///
///  1. The first population_size evaluations are uniform draws in the box;
///     each individual starts with step sigma_d = initial_step * width_d.
///  2. Each generation draws population_size offspring. An offspring picks a
///     parent uniformly from the current elites, mutates its steps
///     log-normally and then its angles by N(0, sigma_d^2), clamped to bounds.
///  3. The elite_count best of parents and offspring survive.
///
/// Stops once evaluation_budget objective calls are spent; a final partial
/// generation is allowed. Offspring are drawn in sequence from one stream, so
/// a larger budget only appends evaluations and never loses the best point.
/// Returns the best point ever evaluated. Throws InvalidArgument for p == 0
/// or an invalid config.
QaoaResult optimize_angles(const DiagonalHamiltonian& diagonal, std::size_t depth,
                           const OptimizerConfig& config, std::uint64_t seed);

/// Probability of the BKS basis state, exact or estimated from shots.
double approximation_ratio(const StateVector& state, const AssignmentBits& bks,
                           const RatioMode& mode, Rng& rng);

/// Diagonal build, angle optimization, and BKS ratio of the best state.
/// Sub-streams of `seed`: {0} drives the optimizer, {1} the shot sampling.
QaoaResult run_qaoa(const KnapsackInstance& instance, const PenaltyPair& penalties,
                    std::size_t depth, const OptimizerConfig& config, const RatioMode& mode,
                    std::uint64_t seed);

/// Depth-1 objective on a regular grid. Axis k is lo + k * width / resolution,
/// so the upper bound itself is excluded.
struct LandscapeGrid {
  std::vector<double> beta_axis;
  std::vector<double> gamma_axis;
  std::vector<std::vector<double>> expectations;  // [gamma_index][beta_index]
  std::size_t argmin_beta = 0;
  std::size_t argmin_gamma = 0;
  double min_value = 0.0;
};

LandscapeGrid landscape_scan(const DiagonalHamiltonian& diagonal, std::size_t resolution,
                             const AngleBounds& beta_bounds = {},
                             const AngleBounds& gamma_bounds = {});

/// "beta,gamma,expectation" rows, gamma-major.
void write_landscape_csv(std::ostream& os, const LandscapeGrid& grid);

/// "evaluation,beta,gamma,expectation" rows for a depth-1 optimizer trace.
void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);

}  // namespace qaoace
