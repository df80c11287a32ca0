#include "qaoace/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "parallel.hpp"
#include "qaoace/csv.hpp"
#include "qaoace/errors.hpp"
#include "qaoace/instances.hpp"
#include "qaoace/random.hpp"

namespace qaoace {

namespace {

using nlohmann::json;

constexpr const char* kRandom = "random";
constexpr const char* kCe = "ce";

std::string scheme_name(RandomPairScheme scheme) {
  return scheme == RandomPairScheme::kUniform ? "uniform" : "initial";
}

RandomPairScheme scheme_from_string(const std::string& text) {
  if (text == "initial") return RandomPairScheme::kInitialDistribution;
  if (text == "uniform") return RandomPairScheme::kUniform;
  throw InvalidArgument("random_scheme must be 'initial' or 'uniform', got '" + text + "'");
}

json interval_json(double lo, double hi) { return json::array({lo, hi}); }

std::pair<double, double> interval_from(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2) {
    throw InvalidArgument(std::string(name) + " must be a [lo, hi] array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw InvalidArgument(std::string("unknown key '") + it.key() + "' in " + where);
    }
  }
}

void apply_ce(const json& j, CeConfig& ce) {
  reject_unknown(j,
                 {"generations", "population", "elite_fraction", "learning_rate", "min_variance",
                  "initial_mean", "initial_variance", "range_b", "range_a_offset"},
                 "ce config");
  if (j.contains("generations")) ce.generations = j["generations"].get<std::size_t>();
  if (j.contains("population")) ce.population = j["population"].get<std::size_t>();
  if (j.contains("elite_fraction")) ce.elite_fraction = j["elite_fraction"].get<double>();
  if (j.contains("learning_rate")) ce.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("min_variance")) ce.min_variance = j["min_variance"].get<double>();
  if (j.contains("initial_mean")) ce.initial_mean = j["initial_mean"].get<double>();
  if (j.contains("initial_variance")) ce.initial_variance = j["initial_variance"].get<double>();
  if (j.contains("range_b")) {
    auto [lo, hi] = interval_from(j["range_b"], "range_b");
    ce.range_b = {lo, hi};
  }
  if (j.contains("range_a_offset")) {
    auto [lo, hi] = interval_from(j["range_a_offset"], "range_a_offset");
    ce.range_a_offset = {lo, hi};
  }
}

void apply_optimizer(const json& j, OptimizerConfig& opt) {
  reject_unknown(j,
                 {"budget", "population_size", "elite_count", "initial_step", "beta_bounds",
                  "gamma_bounds"},
                 "optimizer config");
  if (j.contains("budget")) opt.evaluation_budget = j["budget"].get<std::size_t>();
  if (j.contains("population_size")) opt.population_size = j["population_size"].get<std::size_t>();
  if (j.contains("elite_count")) opt.elite_count = j["elite_count"].get<std::size_t>();
  if (j.contains("initial_step")) opt.initial_step = j["initial_step"].get<double>();
  if (j.contains("beta_bounds")) {
    auto [lo, hi] = interval_from(j["beta_bounds"], "beta_bounds");
    opt.beta_bounds = {lo, hi};
  }
  if (j.contains("gamma_bounds")) {
    auto [lo, hi] = interval_from(j["gamma_bounds"], "gamma_bounds");
    opt.gamma_bounds = {lo, hi};
  }
}

RunRecord make_record(const KnapsackInstance& instance, std::size_t depth, const char* mode,
                      std::size_t pair_index, std::size_t run_index, const PenaltyPair& pair) {
  RunRecord r;
  r.instance = instance.label();
  r.p = depth;
  r.mode = mode;
  r.pair_index = pair_index;
  r.run_index = run_index;
  r.a = pair.a;
  r.b = pair.b;
  return r;
}

}  // namespace

std::string to_string(BenchMode mode) {
  switch (mode) {
    case BenchMode::kRandom:
      return kRandom;
    case BenchMode::kCe:
      return kCe;
    case BenchMode::kBoth:
      return "both";
  }
  return "both";
}

BenchMode bench_mode_from_string(const std::string& text) {
  if (text == kRandom) return BenchMode::kRandom;
  if (text == kCe) return BenchMode::kCe;
  if (text == "both") return BenchMode::kBoth;
  throw InvalidArgument("mode must be 'random', 'ce' or 'both', got '" + text + "'");
}

void ExperimentConfig::validate() const {
  if (instances.empty()) throw InvalidArgument("experiment needs at least one instance");
  if (depths.empty()) throw InvalidArgument("experiment needs at least one depth");
  for (auto p : depths) {
    if (p < 1) throw InvalidArgument("experiment depths must be >= 1");
  }
  if (random_pairs < 1 || runs_per_pair < 1) {
    throw InvalidArgument("random_pairs and runs_per_pair must be >= 1");
  }
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  ce.validate();
  optimizer.validate();
}

ExperimentConfig experiment_config_from_json(const json& j, ExperimentConfig base) {
  if (!j.is_object()) throw InvalidArgument("experiment config must be a JSON object");
  try {
    reject_unknown(j,
                   {"instances", "depths", "mode", "random_pairs", "runs_per_pair", "shots",
                    "exact", "random_scheme", "reevaluate_ce", "seed", "output", "threads", "ce",
                    "optimizer"},
                   "experiment config");
    if (j.contains("instances")) base.instances = j["instances"].get<std::vector<std::string>>();
    if (j.contains("depths")) base.depths = j["depths"].get<std::vector<std::size_t>>();
    if (j.contains("mode")) base.mode = bench_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("random_pairs")) base.random_pairs = j["random_pairs"].get<std::size_t>();
    if (j.contains("runs_per_pair")) base.runs_per_pair = j["runs_per_pair"].get<std::size_t>();
    if (j.contains("shots")) base.ratio = RatioMode::sampled(j["shots"].get<std::uint64_t>());
    if (j.contains("exact") && j["exact"].get<bool>()) base.ratio = RatioMode::exact();
    if (j.contains("random_scheme")) {
      base.random_scheme = scheme_from_string(j["random_scheme"].get<std::string>());
    }
    if (j.contains("reevaluate_ce")) base.reevaluate_ce = j["reevaluate_ce"].get<bool>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output")) base.output = j["output"].get<std::string>();
    if (j.contains("threads")) base.threads = j["threads"].get<std::size_t>();
    if (j.contains("ce")) apply_ce(j["ce"], base.ce);
    if (j.contains("optimizer")) apply_optimizer(j["optimizer"], base.optimizer);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
  return base;
}

json experiment_config_to_json(const ExperimentConfig& c) {
  return json{
      {"instances", c.instances},
      {"depths", c.depths},
      {"mode", to_string(c.mode)},
      {"random_pairs", c.random_pairs},
      {"runs_per_pair", c.runs_per_pair},
      {"shots", c.ratio.shots},
      {"exact", c.ratio.is_exact()},
      {"random_scheme", scheme_name(c.random_scheme)},
      {"reevaluate_ce", c.reevaluate_ce},
      {"seed", c.seed},
      {"ce",
       {{"generations", c.ce.generations},
        {"population", c.ce.population},
        {"elite_fraction", c.ce.elite_fraction},
        {"learning_rate", c.ce.learning_rate},
        {"min_variance", c.ce.min_variance},
        {"initial_mean", c.ce.initial_mean},
        {"initial_variance", c.ce.initial_variance},
        {"range_b", interval_json(c.ce.range_b.lo, c.ce.range_b.hi)},
        {"range_a_offset", interval_json(c.ce.range_a_offset.lo, c.ce.range_a_offset.hi)}}},
      {"optimizer",
       {{"budget", c.optimizer.evaluation_budget},
        {"population_size", c.optimizer.population_size},
        {"elite_count", c.optimizer.elite_count},
        {"initial_step", c.optimizer.initial_step},
        {"beta_bounds", interval_json(c.optimizer.beta_bounds.lo, c.optimizer.beta_bounds.hi)},
        {"gamma_bounds",
         interval_json(c.optimizer.gamma_bounds.lo, c.optimizer.gamma_bounds.hi)}}},
  };
}

std::uint64_t group_seed(std::uint64_t master, const std::string& instance, std::size_t depth,
                         const std::string& mode) {
  return derive_seed(master, {hash_label(instance), depth, hash_label(mode)});
}

std::vector<RunRecord> run_random_mode(const KnapsackInstance& instance, std::size_t depth,
                                       const ExperimentConfig& config) {
  config.validate();
  (void)canonical_bks_bitstring(instance);
  const std::uint64_t group = group_seed(config.seed, instance.label(), depth, kRandom);
  const auto initial = CeDistribution::initial(2, config.ce);
  const double c_max = static_cast<double>(instance.max_value());

  std::vector<PenaltyPair> pairs(config.random_pairs);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    Rng rng(derive_seed(group, {k, 0}));
    if (config.random_scheme == RandomPairScheme::kInitialDistribution) {
      pairs[k] = sample_penalty_pair(instance, initial, config.ce, rng);
    } else {
      const auto& rb = config.ce.range_b;
      const auto& ra = config.ce.range_a_offset;
      pairs[k].b = rb.lo + uniform01(rng) * (rb.hi - rb.lo);
      pairs[k].a = pairs[k].b * c_max + ra.lo + uniform01(rng) * (ra.hi - ra.lo);
    }
  }

  const std::size_t runs = config.runs_per_pair;
  std::vector<RunRecord> records(pairs.size() * runs);
  detail::parallel_for(records.size(), config.threads, [&](std::size_t slot) {
    const std::size_t k = slot / runs;
    const std::size_t run = slot % runs;
    const std::uint64_t seed = derive_seed(group, {k, 1, run});
    const auto r = run_qaoa(instance, pairs[k], depth, config.optimizer, config.ratio, seed);
    auto& rec = records[slot];
    rec = make_record(instance, depth, kRandom, k, run, pairs[k]);
    rec.approximation_ratio = r.approximation_ratio;
    rec.best_expectation = r.best_expectation;
    rec.evaluations_used = r.evaluations_used;
    rec.seed = seed;
  });
  return records;
}

std::vector<RunRecord> run_ce_mode(const KnapsackInstance& instance, std::size_t depth,
                                   const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t group = group_seed(config.seed, instance.label(), depth, kCe);
  CeConfig ce = config.ce;
  ce.seed = group;
  ce.threads = config.threads;
  const auto result = ce_penalty_optimize(instance, depth, config.optimizer, ce, config.ratio);

  const std::size_t last = result.trace.generations.size() - 1;
  const auto& gen = result.trace.generations[last];
  std::vector<RunRecord> records(gen.elites.size());
  detail::parallel_for(records.size(), config.reevaluate_ce ? config.threads : 1,
                       [&](std::size_t rank) {
    const std::size_t i = gen.elites[rank];
    const PenaltyPair pair{gen.samples[i][kCoordA], gen.samples[i][kCoordB]};
    auto& rec = records[rank];
    rec = make_record(instance, depth, kCe, rank, 0, pair);
    if (config.reevaluate_ce) {
      const std::uint64_t seed = derive_seed(group, {rank, 2});
      const auto r = run_qaoa(instance, pair, depth, config.optimizer, config.ratio, seed);
      rec.approximation_ratio = r.approximation_ratio;
      rec.best_expectation = r.best_expectation;
      rec.evaluations_used = r.evaluations_used;
      rec.seed = seed;
    } else {
      const auto& outcome = result.outcomes[last][i];
      rec.approximation_ratio = outcome.approximation_ratio;
      rec.best_expectation = outcome.best_expectation;
      rec.evaluations_used = outcome.evaluations_used;
      rec.seed = outcome.seed;
    }
  });
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& x, const RunRecord& y) {
    return x.approximation_ratio > y.approximation_ratio;
  });
  return records;
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("box statistics need at least one value");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  BoxStats s;
  s.count = v.size();
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return s;
}

BenchmarkReport run_benchmark(const ExperimentConfig& config) {
  config.validate();
  std::vector<KnapsackInstance> instances;
  for (const auto& name : config.instances) instances.push_back(resolve_instance(name));

  BenchmarkReport report;
  json groups = json::array();
  json comparisons = json::array();
  auto stats_json = [](const BoxStats& s) {
    return json{{"count", s.count}, {"min", s.min},       {"q1", s.q1},     {"median", s.median},
                {"q3", s.q3},       {"max", s.max},       {"mean", s.mean}, {"iqr", s.iqr()}};
  };

  for (const auto& instance : instances) {
    for (auto p : config.depths) {
      std::map<std::string, BoxStats> by_mode;
      auto add_group = [&](const char* mode, std::vector<RunRecord> recs) {
        std::vector<double> ratios;
        for (const auto& r : recs) ratios.push_back(r.approximation_ratio);
        const auto stats = box_stats(ratios);
        by_mode[mode] = stats;
        json g = {{"instance", instance.label()}, {"p", p}, {"mode", mode}};
        g.update(stats_json(stats));
        groups.push_back(std::move(g));
        report.records.insert(report.records.end(), recs.begin(), recs.end());
      };
      if (config.mode != BenchMode::kCe) add_group(kRandom, run_random_mode(instance, p, config));
      if (config.mode != BenchMode::kRandom) add_group(kCe, run_ce_mode(instance, p, config));
      if (by_mode.size() == 2) {
        const double rnd = by_mode[kRandom].mean;
        const double ce = by_mode[kCe].mean;
        comparisons.push_back({{"instance", instance.label()},
                               {"p", p},
                               {"random_mean", rnd},
                               {"ce_mean", ce},
                               {"ce_over_random", rnd > 0.0 ? json(ce / rnd) : json(nullptr)}});
      }
    }
  }
  report.summary = json{{"config", experiment_config_to_json(config)},
                        {"groups", std::move(groups)},
                        {"comparisons", std::move(comparisons)}};
  return report;
}

void write_records_csv(std::ostream& os, std::span<const RunRecord> records) {
  CsvWriter csv(os);
  csv.header({"instance", "p", "mode", "pair_index", "run_index", "A", "B",
              "approximation_ratio", "best_expectation", "evaluations_used", "seed"});
  for (const auto& r : records) {
    csv.field(std::string_view(r.instance))
        .field(r.p)
        .field(std::string_view(r.mode))
        .field(r.pair_index)
        .field(r.run_index)
        .field(r.a)
        .field(r.b)
        .field(r.approximation_ratio)
        .field(r.best_expectation)
        .field(r.evaluations_used)
        .field(r.seed);
    csv.end_row();
  }
}

void write_benchmark_artifacts(const BenchmarkReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  const auto csv_path = dir / "records.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot write '" + csv_path.string() + "'");
  write_records_csv(csv, report.records);
  if (!csv.flush()) throw IoError("write failed for '" + csv_path.string() + "'");

  const auto json_path = dir / "summary.json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw IoError("cannot write '" + json_path.string() + "'");
  js << report.summary.dump(2) << '\n';
  if (!js.flush()) throw IoError("write failed for '" + json_path.string() + "'");
}

}  // namespace qaoace
