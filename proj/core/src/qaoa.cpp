#include "qaoace/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "qaoace/csv.hpp"
#include "qaoace/errors.hpp"

namespace qaoace {

QaoaParams QaoaParams::zeros(std::size_t depth) {
  return QaoaParams{std::vector<double>(depth, 0.0), std::vector<double>(depth, 0.0)};
}

void QaoaParams::validate() const {
  if (betas.size() != gammas.size()) {
    throw InvalidArgument("QAOA params have " + std::to_string(betas.size()) + " betas but " +
                          std::to_string(gammas.size()) + " gammas");
  }
}

std::ostream& operator<<(std::ostream& os, const QaoaParams& params) {
  os << "{betas: [";
  for (std::size_t k = 0; k < params.betas.size(); ++k) {
    os << (k ? ", " : "") << format_double(params.betas[k]);
  }
  os << "], gammas: [";
  for (std::size_t k = 0; k < params.gammas.size(); ++k) {
    os << (k ? ", " : "") << format_double(params.gammas[k]);
  }
  return os << "]}";
}

void OptimizerConfig::validate() const {
  if (elite_count < 1) throw InvalidArgument("optimizer elite_count must be >= 1");
  if (elite_count >= population_size) {
    throw InvalidArgument("optimizer elite_count must be < population_size");
  }
  if (evaluation_budget < population_size) {
    throw InvalidArgument("optimizer evaluation_budget must be >= population_size");
  }
  if (!(initial_step > 0.0)) throw InvalidArgument("optimizer initial_step must be > 0");
  if (!(beta_bounds.lo < beta_bounds.hi) || !(gamma_bounds.lo < gamma_bounds.hi)) {
    throw InvalidArgument("optimizer angle bounds need lo < hi");
  }
}

StateVector prepare_state(const DiagonalHamiltonian& diagonal, const QaoaParams& params) {
  params.validate();
  auto state = StateVector::uniform_superposition(diagonal.qubit_count());
  for (std::size_t k = 0; k < params.depth(); ++k) {
    apply_cost_propagator(state, diagonal, params.gammas[k]);
    apply_driver_layer(state, params.betas[k]);
  }
  return state;
}

double objective(const DiagonalHamiltonian& diagonal, const QaoaParams& params) {
  return expectation_diagonal(prepare_state(diagonal, params), diagonal);
}

namespace {

struct Individual {
  std::vector<double> genes;  // betas then gammas
  std::vector<double> steps;
  double fitness = 0.0;
  std::size_t birth = 0;  // evaluation index, breaks fitness ties
};

QaoaParams to_params(const std::vector<double>& genes, std::size_t depth) {
  QaoaParams p;
  p.betas.assign(genes.begin(), genes.begin() + static_cast<std::ptrdiff_t>(depth));
  p.gammas.assign(genes.begin() + static_cast<std::ptrdiff_t>(depth), genes.end());
  return p;
}

double clamp_open(double x, const AngleBounds& b) {
  const double top = std::nextafter(b.hi, b.lo);
  return std::clamp(x, b.lo, top);
}

}  // namespace

QaoaResult optimize_angles(const DiagonalHamiltonian& diagonal, std::size_t depth,
                           const OptimizerConfig& config, std::uint64_t seed) {
  if (depth == 0) throw InvalidArgument("QAOA depth must be >= 1 for optimization");
  config.validate();

  const std::size_t dims = 2 * depth;
  std::vector<AngleBounds> bounds(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    bounds[d] = d < depth ? config.beta_bounds : config.gamma_bounds;
  }
  const double tau_global = 1.0 / std::sqrt(2.0 * static_cast<double>(dims));
  const double tau_local = 1.0 / std::sqrt(2.0 * std::sqrt(static_cast<double>(dims)));

  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  QaoaResult result;
  result.best_expectation = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;

  auto evaluate = [&](Individual& ind) {
    const auto params = to_params(ind.genes, depth);
    ind.fitness = objective(diagonal, params);
    ind.birth = evaluations++;
    if (config.keep_trace) result.trace.push_back({params, ind.fitness});
    if (ind.fitness < result.best_expectation) {
      result.best_expectation = ind.fitness;
      result.best_params = params;
    }
  };
  auto by_fitness = [](const Individual& x, const Individual& y) {
    return x.fitness < y.fitness || (x.fitness == y.fitness && x.birth < y.birth);
  };

  std::vector<Individual> population;
  population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    Individual ind;
    ind.genes.resize(dims);
    ind.steps.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      ind.genes[d] = clamp_open(bounds[d].lo + uniform01(rng) * bounds[d].width(), bounds[d]);
      ind.steps[d] = config.initial_step * bounds[d].width();
    }
    evaluate(ind);
    population.push_back(std::move(ind));
  }
  std::sort(population.begin(), population.end(), by_fitness);
  population.resize(config.elite_count);

  while (evaluations < config.evaluation_budget) {
    const std::size_t brood =
        std::min(config.population_size, config.evaluation_budget - evaluations);
    std::vector<Individual> pool = population;
    for (std::size_t k = 0; k < brood; ++k) {
      const auto parent_index =
          static_cast<std::size_t>(uniform01(rng) * static_cast<double>(population.size()));
      Individual child = population[std::min(parent_index, population.size() - 1)];
      const double global = tau_global * gauss(rng);
      for (std::size_t d = 0; d < dims; ++d) {
        const double width = bounds[d].width();
        child.steps[d] = std::clamp(child.steps[d] * std::exp(global + tau_local * gauss(rng)),
                                    1e-9 * width, width);
        child.genes[d] = clamp_open(child.genes[d] + child.steps[d] * gauss(rng), bounds[d]);
      }
      evaluate(child);
      pool.push_back(std::move(child));
    }
    std::sort(pool.begin(), pool.end(), by_fitness);
    pool.resize(config.elite_count);
    population = std::move(pool);
  }

  result.evaluations_used = evaluations;
  return result;
}

double approximation_ratio(const StateVector& state, const AssignmentBits& bks,
                           const RatioMode& mode, Rng& rng) {
  if (mode.is_exact()) return probability_of(state, bks);
  if (bks.size() != state.qubit_count()) {
    throw DimensionMismatch("BKS has " + std::to_string(bks.size()) + " bits, state has " +
                            std::to_string(state.qubit_count()) + " qubits");
  }
  const auto shots = sample_shots(state, mode.shots, rng);
  return static_cast<double>(shots.count(bks.to_index())) / static_cast<double>(mode.shots);
}

QaoaResult run_qaoa(const KnapsackInstance& instance, const PenaltyPair& penalties,
                    std::size_t depth, const OptimizerConfig& config, const RatioMode& mode,
                    std::uint64_t seed) {
  const auto bks = canonical_bks_bitstring(instance);
  const auto diagonal = build_diagonal(instance, penalties);
  auto result = optimize_angles(diagonal, depth, config, derive_seed(seed, {0}));
  const auto state = prepare_state(diagonal, result.best_params);
  Rng shot_rng(derive_seed(seed, {1}));
  result.approximation_ratio = approximation_ratio(state, bks, mode, shot_rng);
  return result;
}

LandscapeGrid landscape_scan(const DiagonalHamiltonian& diagonal, std::size_t resolution,
                             const AngleBounds& beta_bounds, const AngleBounds& gamma_bounds) {
  if (resolution < 2) throw InvalidArgument("landscape resolution must be >= 2");
  if (!(beta_bounds.lo < beta_bounds.hi) || !(gamma_bounds.lo < gamma_bounds.hi)) {
    throw InvalidArgument("landscape bounds need lo < hi");
  }
  LandscapeGrid grid;
  const double n = static_cast<double>(resolution);
  for (std::size_t k = 0; k < resolution; ++k) {
    const double t = static_cast<double>(k) / n;
    grid.beta_axis.push_back(beta_bounds.lo + t * beta_bounds.width());
    grid.gamma_axis.push_back(gamma_bounds.lo + t * gamma_bounds.width());
  }
  grid.min_value = std::numeric_limits<double>::infinity();
  grid.expectations.assign(resolution, std::vector<double>(resolution));
  for (std::size_t g = 0; g < resolution; ++g) {
    for (std::size_t b = 0; b < resolution; ++b) {
      const double e =
          objective(diagonal, QaoaParams{{grid.beta_axis[b]}, {grid.gamma_axis[g]}});
      grid.expectations[g][b] = e;
      if (e < grid.min_value) {
        grid.min_value = e;
        grid.argmin_gamma = g;
        grid.argmin_beta = b;
      }
    }
  }
  return grid;
}

void write_landscape_csv(std::ostream& os, const LandscapeGrid& grid) {
  CsvWriter csv(os);
  csv.header({"beta", "gamma", "expectation"});
  for (std::size_t g = 0; g < grid.gamma_axis.size(); ++g) {
    for (std::size_t b = 0; b < grid.beta_axis.size(); ++b) {
      csv.field(grid.beta_axis[b]).field(grid.gamma_axis[g]).field(grid.expectations[g][b]);
      csv.end_row();
    }
  }
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  CsvWriter csv(os);
  csv.header({"evaluation", "beta", "gamma", "expectation"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& entry = trace[i];
    if (entry.params.depth() != 1) throw InvalidArgument("trace CSV needs depth-1 params");
    csv.field(i).field(entry.params.betas[0]).field(entry.params.gammas[0]).field(entry.expectation);
    csv.end_row();
  }
}

}  // namespace qaoace
