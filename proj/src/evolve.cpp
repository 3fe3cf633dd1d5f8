#include "growform/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "growform/cmaes.hpp"
#include "growform/colony.hpp"
#include "growform/json_fields.hpp"
#include "growform/rng.hpp"

namespace growform {

EvolutionConfig EvolutionConfig::explore_defaults() { return EvolutionConfig{}; }

EvolutionConfig EvolutionConfig::refine_defaults() {
  EvolutionConfig c;
  c.stage = Stage::refine;
  c.sigma_init = 1e-4;
  c.step_size = 1e-6;
  c.generations = 400;
  c.w_p = 1.0;
  c.w_c = 0.0;
  c.sigma_max = 0.004;
  c.env_seed_policy = EnvSeedPolicy::carried_from_reference;
  return c;
}

EvolutionConfig EvolutionConfig::desk_profile() {
  EvolutionConfig c;
  c.lambda = 16;
  c.generations = 50;
  c.steps_per_individual = 150;
  return c;
}

FitnessParams EvolutionConfig::fitness_params() const {
  FitnessParams f;
  f.min_diameter_threshold = min_diameter_threshold;
  f.layer_height_mm = sim.layer_height_mm;
  f.convexity_weight = complexity_a;
  f.w_p = w_p;
  f.w_c = w_c;
  return f;
}

void validate(const EvolutionConfig &c, const std::string &path) {
  if (c.lambda < 2) throw ConfigError(path + ".lambda", "must be >= 2");
  if (c.mu < 1 || c.mu > c.lambda) throw ConfigError(path + ".mu", "must satisfy 1 <= mu <= lambda");
  if (!(c.sigma_init > 0.0)) throw ConfigError(path + ".sigma_init", "must be > 0");
  if (!(c.step_size > 0.0)) throw ConfigError(path + ".step_size", "must be > 0");
  if (!(c.sigma_max > 0.0)) throw ConfigError(path + ".sigma_max", "must be > 0");
  if (c.generations < 0) throw ConfigError(path + ".generations", "must be >= 0");
  if (c.steps_per_individual < 0 || c.steps_per_individual > kMaxLayers)
    throw ConfigError(path + ".steps_per_individual",
                      "must lie in [0, " + std::to_string(kMaxLayers) + "] (layer cap)");
  if (c.archive_size < 1) throw ConfigError(path + ".archive_size", "must be >= 1");
  if (c.jobs < 1) throw ConfigError(path + ".jobs", "must be >= 1");
  validate(c.fitness_params(), path);
  validate(c.sim, path + ".sim");
  if (c.stage == Stage::refine) {
    if (!c.reference) throw ConfigError(path + ".reference", "refine requires a reference genome");
    if (!c.reference_env_seed) throw ConfigError(path + ".reference_env_seed", "refine requires the carried env seed");
    if (c.env_seed_policy != EnvSeedPolicy::carried_from_reference)
      throw ConfigError(path + ".env_seed_policy", "refine requires carried-from-reference");
  }
  if (c.reference) validate(*c.reference, path + ".reference");
}

namespace {

const char *name(Stage s) { return s == Stage::explore ? "explore" : "refine"; }
const char *name(EnvSeedPolicy p) {
  return p == EnvSeedPolicy::fresh_per_run ? "fresh-per-run" : "carried-from-reference";
}
const char *name(InitialMean m) { return m == InitialMean::random ? "random" : "center"; }

}  // namespace

nlohmann::json to_json(const EvolutionConfig &c) {
  nlohmann::json j = {{"stage", name(c.stage)},
                      {"lambda", c.lambda},
                      {"mu", c.mu},
                      {"sigma_init", c.sigma_init},
                      {"step_size", c.step_size},
                      {"sigma_max", c.sigma_max},
                      {"generations", c.generations},
                      {"w_p", c.w_p},
                      {"w_c", c.w_c},
                      {"complexity_a", c.complexity_a},
                      {"min_diameter_threshold", c.min_diameter_threshold},
                      {"master_seed", c.master_seed},
                      {"env_seed_policy", name(c.env_seed_policy)},
                      {"initial_mean", name(c.initial_mean)},
                      {"steps_per_individual", c.steps_per_individual},
                      {"search_box", to_json(c.search_box)},
                      {"sim", to_json(c.sim)},
                      {"archive_size", c.archive_size},
                      {"jobs", c.jobs}};
  if (c.reference) j["reference"] = to_json(*c.reference);
  if (c.reference_env_seed) j["reference_env_seed"] = *c.reference_env_seed;
  if (c.reference_printability) j["reference_printability"] = *c.reference_printability;
  if (c.reference_complexity) j["reference_complexity"] = *c.reference_complexity;
  return j;
}

EvolutionConfig evolution_config_from_json(const nlohmann::json &j, const std::string &path) {
  if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
  std::string stage = j.value("stage", std::string("explore"));
  std::string profile = j.value("profile", std::string("paper"));
  EvolutionConfig c;
  if (stage == "refine")
    c = EvolutionConfig::refine_defaults();
  else if (stage != "explore")
    throw ConfigError(path + ".stage", "expected \"explore\" or \"refine\"");
  if (profile == "desk") {
    const auto desk = EvolutionConfig::desk_profile();
    c.lambda = desk.lambda;
    c.generations = desk.generations;
    c.steps_per_individual = desk.steps_per_individual;
  } else if (profile != "paper") {
    throw ConfigError(path + ".profile", "expected \"paper\" or \"desk\"");
  }

  detail::FieldReader r(j, path);
  r.optional("stage", stage);
  r.optional("profile", profile);
  r.optional("lambda", c.lambda);
  r.optional("mu", c.mu);
  r.optional("sigma_init", c.sigma_init);
  r.optional("step_size", c.step_size);
  r.optional("sigma_max", c.sigma_max);
  r.optional("generations", c.generations);
  r.optional("w_p", c.w_p);
  r.optional("w_c", c.w_c);
  r.optional("complexity_a", c.complexity_a);
  r.optional("min_diameter_threshold", c.min_diameter_threshold);
  r.optional("master_seed", c.master_seed);
  r.optional("steps_per_individual", c.steps_per_individual);
  r.optional("archive_size", c.archive_size);
  r.optional("jobs", c.jobs);
  std::string policy = name(c.env_seed_policy);
  r.optional("env_seed_policy", policy);
  if (policy == "fresh-per-run")
    c.env_seed_policy = EnvSeedPolicy::fresh_per_run;
  else if (policy == "carried-from-reference")
    c.env_seed_policy = EnvSeedPolicy::carried_from_reference;
  else
    throw ConfigError(path + ".env_seed_policy", "expected \"fresh-per-run\" or \"carried-from-reference\"");
  std::string mean = name(c.initial_mean);
  r.optional("initial_mean", mean);
  if (mean == "random")
    c.initial_mean = InitialMean::random;
  else if (mean == "center")
    c.initial_mean = InitialMean::center;
  else
    throw ConfigError(path + ".initial_mean", "expected \"random\" or \"center\"");
  if (const auto *box = r.child("search_box")) c.search_box = search_box_from_json(*box, r.path_of("search_box"));
  if (const auto *sim = r.child("sim")) c.sim = sim_params_from_json(*sim, r.path_of("sim"));
  if (const auto *ref = r.child("reference")) c.reference = genome_from_json(*ref, r.path_of("reference"));
  if (const auto *seed = r.child("reference_env_seed")) {
    if (!seed->is_number_unsigned()) throw ConfigError(r.path_of("reference_env_seed"), "expected an unsigned integer");
    c.reference_env_seed = seed->get<std::uint64_t>();
  }
  if (const auto *p = r.child("reference_printability")) c.reference_printability = p->get<double>();
  if (const auto *cc = r.child("reference_complexity")) c.reference_complexity = cc->get<double>();
  r.finish();
  validate(c, path);
  return c;
}

nlohmann::json to_json(const GenerationRecord &r) {
  return {{"generation", r.generation},
          {"best_fitness", r.best_fitness},
          {"best_P", r.best_p},
          {"best_C", r.best_c},
          {"mean_fitness", r.mean_fitness},
          {"sigma", r.sigma},
          {"covariance_trace", r.covariance_trace},
          {"best_genome", to_json(r.best_genome)},
          {"best_so_far_fitness", r.best_so_far_fitness},
          {"best_so_far_P", r.best_so_far_p},
          {"best_so_far_C", r.best_so_far_c},
          {"best_so_far_genome", to_json(r.best_so_far_genome)}};
}

GenerationRecord generation_record_from_json(const nlohmann::json &j) {
  GenerationRecord r;
  r.generation = j.at("generation").get<int>();
  r.best_fitness = j.at("best_fitness").get<double>();
  r.best_p = j.at("best_P").get<double>();
  r.best_c = j.at("best_C").get<double>();
  r.mean_fitness = j.at("mean_fitness").get<double>();
  r.sigma = j.at("sigma").get<double>();
  r.covariance_trace = j.at("covariance_trace").get<double>();
  r.best_genome = genome_from_json(j.at("best_genome"));
  r.best_so_far_fitness = j.at("best_so_far_fitness").get<double>();
  r.best_so_far_p = j.at("best_so_far_P").get<double>();
  r.best_so_far_c = j.at("best_so_far_C").get<double>();
  r.best_so_far_genome = genome_from_json(j.at("best_so_far_genome"));
  return r;
}

nlohmann::json to_json(const Champion &c) {
  return {{"genome", to_json(c.genome)},       {"env_seed", c.env_seed},
          {"generation", c.generation},        {"fitness", c.fitness},
          {"printability", c.printability},    {"complexity", c.complexity}};
}

Champion champion_from_json(const nlohmann::json &j) {
  Champion c;
  c.genome = genome_from_json(j.at("genome"));
  c.env_seed = j.at("env_seed").get<std::uint64_t>();
  c.generation = j.at("generation").get<int>();
  c.fitness = j.at("fitness").get<double>();
  c.printability = j.at("printability").get<double>();
  c.complexity = j.at("complexity").get<double>();
  return c;
}

nlohmann::json to_json(const Checkpoint &c) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto &r : c.log.records) records.push_back(to_json(r));
  nlohmann::json champions = nlohmann::json::array();
  for (const auto &ch : c.log.champions) champions.push_back(to_json(ch));
  return {{"cma_state", c.cma_state},
          {"next_generation", c.next_generation},
          {"env_seed", c.log.env_seed},
          {"cma_repairs", c.log.cma_repairs},
          {"records", records},
          {"champions", champions}};
}

Checkpoint checkpoint_from_json(const nlohmann::json &j) {
  Checkpoint c;
  c.cma_state = j.at("cma_state");
  c.next_generation = j.at("next_generation").get<int>();
  c.log.env_seed = j.at("env_seed").get<std::uint64_t>();
  c.log.cma_repairs = j.at("cma_repairs").get<int>();
  for (const auto &r : j.at("records")) c.log.records.push_back(generation_record_from_json(r));
  for (const auto &ch : j.at("champions")) c.log.champions.push_back(champion_from_json(ch));
  return c;
}

Evaluation evaluate_genome(const Genome &genome, std::uint64_t env_seed, const EvolutionConfig &config) {
  const FormHistory history = grow(genome, config.sim, env_seed, config.steps_per_individual);
  Evaluation e;
  e.report = evaluate(history, config.fitness_params());
  e.fitness = e.report.fitness;
  return e;
}

std::vector<Evaluation> evaluate_population(const std::vector<Genome> &genomes, std::uint64_t env_seed,
                                            const EvolutionConfig &config) {
  std::vector<Evaluation> out(genomes.size());
  const auto n = static_cast<std::ptrdiff_t>(genomes.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = evaluate_genome(genomes[static_cast<std::size_t>(i)], env_seed, config);
  return out;
}

std::vector<Evaluation> evaluate_population_serial(const std::vector<Genome> &genomes, std::uint64_t env_seed,
                                                   const EvolutionConfig &config) {
  std::vector<Evaluation> out;
  out.reserve(genomes.size());
  for (const auto &g : genomes) out.push_back(evaluate_genome(g, env_seed, config));
  return out;
}

namespace {

void archive(std::vector<Champion> &champions, Champion candidate, int capacity) {
  for (const auto &c : champions)
    if (c.genome == candidate.genome && c.env_seed == candidate.env_seed) return;
  champions.push_back(std::move(candidate));
  std::stable_sort(champions.begin(), champions.end(),
                   [](const Champion &a, const Champion &b) { return a.fitness > b.fitness; });
  if (champions.size() > static_cast<std::size_t>(capacity)) champions.resize(static_cast<std::size_t>(capacity));
}

Eigen::VectorXd initial_mean(const EvolutionConfig &config) {
  Eigen::VectorXd mean(static_cast<Eigen::Index>(Genome::kAlleles));
  if (config.reference) {
    const auto unit = config.search_box.normalize(*config.reference);
    for (std::size_t i = 0; i < unit.size(); ++i) mean[static_cast<Eigen::Index>(i)] = std::clamp(unit[i], 0.0, 1.0);
    return mean;
  }
  if (config.initial_mean == InitialMean::center) return Eigen::VectorXd::Constant(mean.size(), 0.5);
  Rng rng(derive_seed(config.master_seed, 2));
  for (Eigen::Index i = 0; i < mean.size(); ++i) mean[i] = rng.uniform();
  return mean;
}

}  // namespace

RunLog run_evolution(const EvolutionConfig &config, const RunHooks &hooks, const std::optional<Checkpoint> &resume) {
  validate(config);
  const std::uint64_t env_seed = config.env_seed_policy == EnvSeedPolicy::carried_from_reference
                                     ? config.reference_env_seed.value()
                                     : derive_seed(config.master_seed, 0);

  const auto dim = static_cast<Eigen::Index>(Genome::kAlleles);
  CmaEsOptions options;
  options.lambda = config.lambda;
  options.mu = config.mu;
  options.sigma = config.sigma_init;
  options.learning_rate = config.step_size;
  options.sigma_max = config.sigma_max;
  options.lower = Eigen::VectorXd::Zero(dim);
  options.upper = Eigen::VectorXd::Ones(dim);
  CmaEs cma(initial_mean(config), options, derive_seed(config.master_seed, 1));

  RunLog log;
  log.env_seed = env_seed;
  int start = 0;
  if (resume) {
    if (resume->log.env_seed != env_seed) throw SeedMismatchError("checkpoint env seed differs from the config");
    cma.load_state(resume->cma_state);
    log = resume->log;
    start = resume->next_generation;
  }

  int done = 0;
  for (int gen = start; gen <= config.generations; ++gen) {
    if (hooks.stop_after >= 0 && done >= hooks.stop_after) break;
    const auto &population = cma.ask();
    std::vector<Genome> genomes;
    genomes.reserve(population.size());
    for (const auto &x : population) {
      std::array<double, Genome::kAlleles> unit{};
      for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = x[static_cast<Eigen::Index>(i)];
      genomes.push_back(config.search_box.denormalize(unit));
    }
    const auto evals = evaluate_population(genomes, env_seed, config);

    GenerationRecord rec;
    rec.generation = gen;
    rec.sigma = cma.sigma();
    rec.covariance_trace = cma.covariance().trace();
    std::size_t best = 0;
    double sum = 0.0;
    std::vector<double> objective(evals.size());
    for (std::size_t i = 0; i < evals.size(); ++i) {
      sum += evals[i].fitness;
      objective[i] = -evals[i].fitness;
      if (evals[i].fitness > evals[best].fitness) best = i;
    }
    rec.mean_fitness = sum / static_cast<double>(evals.size());
    rec.best_fitness = evals[best].fitness;
    rec.best_p = evals[best].report.printability;
    rec.best_c = evals[best].report.complexity;
    rec.best_genome = genomes[best];
    const bool improved = log.records.empty() || rec.best_fitness > log.records.back().best_so_far_fitness;
    if (improved) {
      rec.best_so_far_fitness = rec.best_fitness;
      rec.best_so_far_p = rec.best_p;
      rec.best_so_far_c = rec.best_c;
      rec.best_so_far_genome = rec.best_genome;
    } else {
      const auto &prev = log.records.back();
      rec.best_so_far_fitness = prev.best_so_far_fitness;
      rec.best_so_far_p = prev.best_so_far_p;
      rec.best_so_far_c = prev.best_so_far_c;
      rec.best_so_far_genome = prev.best_so_far_genome;
    }
    log.records.push_back(rec);
    for (std::size_t i = 0; i < evals.size(); ++i)
      archive(log.champions,
              Champion{genomes[i], env_seed, gen, evals[i].fitness, evals[i].report.printability,
                       evals[i].report.complexity},
              config.archive_size);

    cma.tell(objective);
    log.cma_repairs = cma.repairs();
    ++done;
    if (hooks.on_checkpoint) hooks.on_checkpoint(Checkpoint{cma.save_state(), log, gen + 1});
  }
  return log;
}

RunLog explore(const EvolutionConfig &config, const RunHooks &hooks, const std::optional<Checkpoint> &resume) {
  EvolutionConfig c = config;
  c.stage = Stage::explore;
  c.env_seed_policy = EnvSeedPolicy::fresh_per_run;
  c.reference.reset();
  return run_evolution(c, hooks, resume);
}

RunLog refine(const EvolutionConfig &config, const RunHooks &hooks, const std::optional<Checkpoint> &resume) {
  EvolutionConfig c = config;
  c.stage = Stage::refine;
  c.env_seed_policy = EnvSeedPolicy::carried_from_reference;
  validate(c);
  if (c.reference_printability || c.reference_complexity) {
    const Evaluation e = evaluate_genome(*c.reference, *c.reference_env_seed, c);
    const auto mismatch = [](std::optional<double> want, double got) {
      return want && std::abs(*want - got) > 1e-12;
    };
    if (mismatch(c.reference_printability, e.report.printability) ||
        mismatch(c.reference_complexity, e.report.complexity))
      throw SeedMismatchError("reference re-evaluates to P=" + std::to_string(e.report.printability) +
                              " C=" + std::to_string(e.report.complexity) +
                              " which differs from the archived scores; check the carried env seed");
  }
  return run_evolution(c, hooks, resume);
}

Summary summarize(std::vector<double> values, int bins) {
  Summary s;
  s.histogram.assign(static_cast<std::size_t>(bins), 0);
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  for (double v : values) {
    const int b = std::clamp(static_cast<int>(std::floor(v * bins)), 0, bins - 1);
    ++s.histogram[static_cast<std::size_t>(b)];
  }
  std::sort(values.begin(), values.end());
  s.median = quantile_sorted(values, 0.5);
  return s;
}

DesignSpaceReport sample_design_space(int n, const EvolutionConfig &config) {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  DesignSpaceReport report;
  report.samples.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(config.master_seed, 1000 + static_cast<std::uint64_t>(i)));
    std::array<double, Genome::kAlleles> unit{};
    for (auto &u : unit) u = rng.uniform();
    auto &s = report.samples[static_cast<std::size_t>(i)];
    s.genome = config.search_box.denormalize(unit);
    s.env_seed = rng.next_u64();
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.jobs)
  for (int i = 0; i < n; ++i) {
    auto &s = report.samples[static_cast<std::size_t>(i)];
    const Evaluation e = evaluate_genome(s.genome, s.env_seed, config);
    s.printability = e.report.printability;
    s.complexity = e.report.complexity;
    s.fitness = e.fitness;
  }
  std::vector<double> p, c;
  for (const auto &s : report.samples) {
    p.push_back(s.printability);
    c.push_back(s.complexity);
  }
  report.printability = summarize(std::move(p));
  report.complexity = summarize(std::move(c));
  return report;
}

nlohmann::json to_json(const DesignSpaceReport &r) {
  auto summary = [](const Summary &s) {
    return nlohmann::json{{"mean", s.mean}, {"stddev", s.stddev}, {"median", s.median}, {"histogram", s.histogram}};
  };
  nlohmann::json samples = nlohmann::json::array();
  for (const auto &s : r.samples)
    samples.push_back({{"genome", to_json(s.genome)},
                       {"env_seed", s.env_seed},
                       {"printability", s.printability},
                       {"complexity", s.complexity},
                       {"fitness", s.fitness}});
  return {{"n", r.samples.size()},
          {"printability", summary(r.printability)},
          {"complexity", summary(r.complexity)},
          {"samples", samples}};
}

}  // namespace growform
