#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "growform/fitness.hpp"
#include "growform/form_history.hpp"
#include "growform/genome.hpp"
#include "growform/sim_params.hpp"
#include "json.hpp"

namespace growform {

enum class Stage { explore, refine };
enum class EnvSeedPolicy { fresh_per_run, carried_from_reference };
enum class InitialMean { random, center };

struct EvolutionConfig {
  Stage stage = Stage::explore;
  int lambda = 40;
  int mu = 2;
  double sigma_init = 0.1;
  double step_size = 1e-3;   ///< CMA-ES learning rate
  double sigma_max = 0.5;    ///< cap on the step size in the unit genome cube
  int generations = 250;
  double w_p = 0.5;
  double w_c = 0.5;
  double complexity_a = 0.5;
  double min_diameter_threshold = 10.0;
  std::uint64_t master_seed = 1;
  std::optional<Genome> reference;
  std::optional<std::uint64_t> reference_env_seed;
  /// Archived scores the reference must reproduce under its carried seed.
  std::optional<double> reference_printability;
  std::optional<double> reference_complexity;
  EnvSeedPolicy env_seed_policy = EnvSeedPolicy::fresh_per_run;
  InitialMean initial_mean = InitialMean::random;
  int steps_per_individual = 500;
  SearchBox search_box;
  SimParams sim;
  int archive_size = 5;
  int jobs = 1;

  /// lambda 40, mu 2, sigma 0.1, learning rate 1e-3, 250 generations.
  static EvolutionConfig explore_defaults();
  /// sigma 1e-4, learning rate 1e-6, 400 generations, printability-weighted.
  static EvolutionConfig refine_defaults();
  /// lambda 16, 50 generations, 150 steps per individual.
  static EvolutionConfig desk_profile();

  FitnessParams fitness_params() const;
};

void validate(const EvolutionConfig &c, const std::string &path = "evolution");
nlohmann::json to_json(const EvolutionConfig &c);
/// Starts from the stage defaults named by "stage" (or "profile": "desk"),
/// then applies the remaining keys; unknown keys are rejected.
EvolutionConfig evolution_config_from_json(const nlohmann::json &j, const std::string &path = "evolution");

struct Evaluation {
  double fitness = 0.0;
  FitnessReport report;
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double best_p = 0.0;
  double best_c = 0.0;
  double mean_fitness = 0.0;
  double sigma = 0.0;
  double covariance_trace = 0.0;
  Genome best_genome;
  double best_so_far_fitness = 0.0;
  double best_so_far_p = 0.0;
  double best_so_far_c = 0.0;
  Genome best_so_far_genome;

  friend bool operator==(const GenerationRecord &, const GenerationRecord &) = default;
};

struct Champion {
  Genome genome;
  std::uint64_t env_seed = 0;
  int generation = 0;
  double fitness = 0.0;
  double printability = 0.0;
  double complexity = 0.0;

  friend bool operator==(const Champion &, const Champion &) = default;
};

struct RunLog {
  std::uint64_t env_seed = 0;
  std::vector<GenerationRecord> records;
  std::vector<Champion> champions;  ///< best first
  int cma_repairs = 0;

  friend bool operator==(const RunLog &, const RunLog &) = default;
};

nlohmann::json to_json(const GenerationRecord &r);
GenerationRecord generation_record_from_json(const nlohmann::json &j);
nlohmann::json to_json(const Champion &c);
Champion champion_from_json(const nlohmann::json &j);

class SeedMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grows and scores one genome.
Evaluation evaluate_genome(const Genome &genome, std::uint64_t env_seed, const EvolutionConfig &config);

/// Grows and scores every genome under one environment seed. Runs on up to
/// `config.jobs` threads; results keep input order and do not depend on the
/// thread count.
std::vector<Evaluation> evaluate_population(const std::vector<Genome> &genomes, std::uint64_t env_seed,
                                            const EvolutionConfig &config);

/// Serial evaluate_population, kept as a reference for tests and benchmarks.
std::vector<Evaluation> evaluate_population_serial(const std::vector<Genome> &genomes, std::uint64_t env_seed,
                                                   const EvolutionConfig &config);

/// Resumable optimizer state written after every generation.
struct Checkpoint {
  nlohmann::json cma_state;
  RunLog log;
  int next_generation = 0;
};

nlohmann::json to_json(const Checkpoint &c);
Checkpoint checkpoint_from_json(const nlohmann::json &j);

struct RunHooks {
  /// Called after every completed generation.
  std::function<void(const Checkpoint &)> on_checkpoint;
  /// Stop after this many generations in this invocation (simulates an
  /// interruption); negative runs to completion.
  int stop_after = -1;
};

/// Runs CMA-ES for config.generations generations after the initial
/// population. With `resume`, continues from that checkpoint.
RunLog run_evolution(const EvolutionConfig &config, const RunHooks &hooks = {},
                     const std::optional<Checkpoint> &resume = std::nullopt);

/// Exploration stage: fresh environment seed derived from the master seed.
RunLog explore(const EvolutionConfig &config, const RunHooks &hooks = {},
               const std::optional<Checkpoint> &resume = std::nullopt);

/// Refinement stage around config.reference under its carried environment
/// seed. Throws SeedMismatchError if the reference does not reproduce its
/// archived printability and complexity.
RunLog refine(const EvolutionConfig &config, const RunHooks &hooks = {},
              const std::optional<Checkpoint> &resume = std::nullopt);

struct SampleRecord {
  Genome genome;
  std::uint64_t env_seed = 0;
  double printability = 0.0;
  double complexity = 0.0;
  double fitness = 0.0;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
  double median = 0.0;
  std::vector<int> histogram;  ///< counts over [0, 1] in equal bins
};

Summary summarize(std::vector<double> values, int bins = 10);

struct DesignSpaceReport {
  std::vector<SampleRecord> samples;
  Summary printability;
  Summary complexity;
};

/// Uniform random genomes in the search box, each with its own environment
/// seed, grown for steps_per_individual steps and scored.
DesignSpaceReport sample_design_space(int n, const EvolutionConfig &config);

nlohmann::json to_json(const DesignSpaceReport &r);

}  // namespace growform
