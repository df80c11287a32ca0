#include "qaoace/cross_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "qaoace/csv.hpp"
#include "qaoace/errors.hpp"
#include "qaoace/truncated_normal.hpp"

namespace qaoace {

std::size_t CeConfig::elite_count() const {
  const double raw = static_cast<double>(population) * elite_fraction;
  // 100 * 0.1 must give 10, not 11.
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

void CeConfig::validate() const {
  if (generations < 1) throw InvalidArgument("CE generations must be >= 1");
  if (population < 1) throw InvalidArgument("CE population must be >= 1");
  if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) {
    throw InvalidArgument("CE elite_fraction must be in (0, 1]");
  }
  if (elite_count() < 1) throw InvalidArgument("CE elite count must be >= 1");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    throw InvalidArgument("CE learning_rate must be in [0, 1]");
  }
  if (!(min_variance > 0.0)) throw InvalidArgument("CE min_variance must be > 0");
  if (!(initial_variance > 0.0)) throw InvalidArgument("CE initial_variance must be > 0");
  if (!std::isfinite(initial_mean)) throw InvalidArgument("CE initial_mean must be finite");
  if (!(range_b.lo < range_b.hi)) throw InvalidArgument("CE range_b needs lo < hi");
  if (!(range_a_offset.lo < range_a_offset.hi)) {
    throw InvalidArgument("CE range_a_offset needs lo < hi");
  }
  if (threads < 1) throw InvalidArgument("CE threads must be >= 1");
}

CeDistribution CeDistribution::initial(std::size_t dims, const CeConfig& config) {
  return CeDistribution{std::vector<double>(dims, config.initial_mean),
                        std::vector<double>(dims, config.initial_variance)};
}

CeDistribution update_distribution(std::span<const std::vector<double>> elites,
                                   const CeDistribution& previous, const CeConfig& config) {
  if (elites.empty()) throw InvalidArgument("distribution update needs at least one elite");
  const std::size_t dims = previous.dims();
  const double count = static_cast<double>(elites.size());
  const double lr = config.learning_rate;

  CeDistribution next = previous;
  for (std::size_t d = 0; d < dims; ++d) {
    double mean = 0.0;
    for (const auto& e : elites) {
      if (e.size() != dims) throw DimensionMismatch("elite sample dimension mismatch");
      mean += e[d];
    }
    mean /= count;
    double var = 0.0;
    for (const auto& e : elites) var += (e[d] - mean) * (e[d] - mean);
    var /= count;

    next.mean[d] = (1.0 - lr) * previous.mean[d] + lr * mean;
    next.variance[d] =
        std::max((1.0 - lr) * previous.variance[d] + lr * var, config.min_variance);
  }
  return next;
}

CeResult ce_generic(const CeFitness& fitness, const CeSampler& sampler, std::size_t dims,
                    const CeConfig& config) {
  config.validate();
  const std::size_t n = config.population;
  const std::size_t n_elite = config.elite_count();

  CeResult result;
  CeDistribution dist = CeDistribution::initial(dims, config);
  bool have_best = false;

  for (std::size_t g = 0; g < config.generations; ++g) {
    CeGeneration gen;
    gen.before = dist;
    gen.samples.resize(n);
    gen.fitness.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(derive_seed(config.seed, {g, i, 0}));
      gen.samples[i] = sampler(dist, rng);
      if (gen.samples[i].size() != dims) throw DimensionMismatch("sampler returned wrong dimension");
    }
    detail::parallel_for(n, config.threads, [&](std::size_t i) {
      const SampleContext ctx{g, i, derive_seed(config.seed, {g, i, 1})};
      gen.fitness[i] = fitness(gen.samples[i], ctx);
    });

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return gen.fitness[x] > gen.fitness[y];
    });
    gen.elites.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_elite));

    const std::size_t top = order.front();
    if (!have_best || gen.fitness[top] > result.best_fitness) {
      have_best = true;
      result.best_fitness = gen.fitness[top];
      result.best_sample = gen.samples[top];
      result.best_generation = g;
      result.best_index = top;
    }

    std::vector<std::vector<double>> elite_samples;
    elite_samples.reserve(n_elite);
    for (auto i : gen.elites) elite_samples.push_back(gen.samples[i]);
    dist = update_distribution(elite_samples, dist, config);
    gen.after = dist;
    result.trace.generations.push_back(std::move(gen));
  }
  return result;
}

CeSampler truncated_normal_box_sampler(std::vector<Interval> box) {
  for (const auto& iv : box) {
    if (!(iv.lo < iv.hi)) throw InvalidArgument("sampler box needs lo < hi on every axis");
  }
  return [box = std::move(box)](const CeDistribution& dist, Rng& rng) {
    std::vector<double> x(box.size());
    for (std::size_t d = 0; d < box.size(); ++d) {
      x[d] = sample_truncated_normal(dist.mean[d], dist.variance[d], box[d].lo, box[d].hi, rng);
    }
    return x;
  };
}

PenaltyPair sample_penalty_pair(const KnapsackInstance& instance, const CeDistribution& dist,
                                const CeConfig& config, Rng& rng) {
  if (dist.dims() != 2) throw DimensionMismatch("penalty distribution must have 2 coordinates");
  PenaltyPair pair;
  pair.b = sample_truncated_normal(dist.mean[kCoordB], dist.variance[kCoordB], config.range_b.lo,
                                   config.range_b.hi, rng);
  const double floor = pair.b * static_cast<double>(instance.max_value());
  pair.a = sample_truncated_normal(dist.mean[kCoordA], dist.variance[kCoordA],
                                   floor + config.range_a_offset.lo,
                                   floor + config.range_a_offset.hi, rng);
  return pair;
}

PenaltyCeResult ce_penalty_optimize(const KnapsackInstance& instance, std::size_t depth,
                                    const OptimizerConfig& optimizer, const CeConfig& config,
                                    const RatioMode& mode) {
  config.validate();
  optimizer.validate();
  // Surfaces UnrepresentableOptimum before any sampling.
  (void)canonical_bks_bitstring(instance);

  PenaltyCeResult out;
  out.outcomes.assign(config.generations, std::vector<QaoaOutcome>(config.population));

  auto sampler = [&](const CeDistribution& dist, Rng& rng) {
    const auto pair = sample_penalty_pair(instance, dist, config, rng);
    std::vector<double> x(2);
    x[kCoordA] = pair.a;
    x[kCoordB] = pair.b;
    return x;
  };
  auto fitness = [&](std::span<const double> x, const SampleContext& ctx) {
    const PenaltyPair pair{x[kCoordA], x[kCoordB]};
    const auto r = run_qaoa(instance, pair, depth, optimizer, mode, ctx.seed);
    out.outcomes[ctx.generation][ctx.index] =
        QaoaOutcome{r.approximation_ratio, r.best_expectation, r.evaluations_used, ctx.seed};
    return r.approximation_ratio;
  };

  auto ce = ce_generic(fitness, sampler, 2, config);
  out.best = PenaltyPair{ce.best_sample[kCoordA], ce.best_sample[kCoordB]};
  out.best_fitness = ce.best_fitness;
  out.trace = std::move(ce.trace);
  return out;
}

nlohmann::json trace_to_json(const CeTrace& trace, const std::vector<std::string>& coordinates) {
  auto dist_json = [](const CeDistribution& d) {
    return nlohmann::json{{"mean", d.mean}, {"variance", d.variance}};
  };
  nlohmann::json gens = nlohmann::json::array();
  for (std::size_t g = 0; g < trace.generations.size(); ++g) {
    const auto& gen = trace.generations[g];
    gens.push_back({{"generation", g},
                    {"before", dist_json(gen.before)},
                    {"after", dist_json(gen.after)},
                    {"samples", gen.samples},
                    {"fitness", gen.fitness},
                    {"elites", gen.elites}});
  }
  return nlohmann::json{{"coordinates", coordinates}, {"generations", std::move(gens)}};
}

void write_trace_csv(std::ostream& os, const CeTrace& trace,
                     const std::vector<std::string>& coordinates) {
  CsvWriter csv(os);
  csv.field(std::string_view("generation")).field(std::string_view("sample_index"));
  for (const auto& c : coordinates) csv.field(std::string_view(c));
  csv.field(std::string_view("fitness")).field(std::string_view("is_elite"));
  csv.end_row();
  for (std::size_t g = 0; g < trace.generations.size(); ++g) {
    const auto& gen = trace.generations[g];
    std::vector<bool> elite(gen.samples.size(), false);
    for (auto i : gen.elites) elite[i] = true;
    for (std::size_t i = 0; i < gen.samples.size(); ++i) {
      if (gen.samples[i].size() != coordinates.size()) {
        throw DimensionMismatch("trace CSV coordinate names do not match sample dimension");
      }
      csv.field(g).field(i);
      for (double v : gen.samples[i]) csv.field(v);
      csv.field(gen.fitness[i]).field(static_cast<bool>(elite[i]));
      csv.end_row();
    }
  }
}

}  // namespace qaoace
