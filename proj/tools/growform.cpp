// growform: command-line front end for growing, scoring, evolving and
// exporting differential-growth forms.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "growform/ablation.hpp"
#include "growform/colony.hpp"
#include "growform/config_error.hpp"
#include "growform/evolve.hpp"
#include "growform/fitness.hpp"
#include "growform/gcode.hpp"
#include "growform/io.hpp"
#include "growform/run_store.hpp"
#include "growform/series.hpp"
#include "growform/svg.hpp"

namespace fs = std::filesystem;
using namespace growform;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kRuntime = 2, kThreshold = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json(const std::string &path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

struct SeedChoice {
  std::uint64_t value = 0;
  std::string source;
};

SeedChoice resolve_seed(const CLI::Option *flag, std::uint64_t flag_value, std::optional<std::uint64_t> from_config) {
  if (flag->count() > 0) return {flag_value, "flag"};
  if (from_config) return {*from_config, "config"};
  const std::uint64_t s = entropy_seed();
  std::cerr << "growform: no --seed given, using entropy seed " << s << "\n";
  return {s, "entropy"};
}

std::string describe(const fs::path &p) { return p.string(); }

// ---------------------------------------------------------------- grow

struct GrowArgs {
  std::string genome, params, out;
  std::uint64_t seed = 0;
  int steps = 500;
  bool preview = false;
  CLI::Option *seed_opt = nullptr;
};

int run_grow(const GrowArgs &a) {
  const Genome genome = genome_from_json(load_json(a.genome), "genome");
  const SimParams params = a.params.empty() ? SimParams{} : sim_params_from_json(load_json(a.params), "params");
  const SeedChoice seed = resolve_seed(a.seed_opt, a.seed, std::nullopt);
  const FormHistory history = grow(genome, params, seed.value, a.steps);

  std::map<std::string, std::string> files;
  files["history.json"] = dump_form_history(history);
  if (a.preview) files["preview.svg"] = emit_overlay_svg(history, 0, history.layers.size() - 1, 10);

  Manifest m;
  m.command = "grow";
  m.seed = seed.value;
  m.seed_source = seed.source;
  m.config = {{"genome", to_json(genome)}, {"params", to_json(params)}, {"steps", a.steps}};
  m.inputs = {{"genome", a.genome}, {"params", a.params}};
  write_outputs(a.out, files, m);
  std::cout << "grew " << history.layers.size() << " layers into " << describe(fs::path(a.out) / "history.json")
            << "\n";
  return kOk;
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string history, fitness;
  double threshold = 0.0;
  CLI::Option *threshold_opt = nullptr;
};

int run_score(const ScoreArgs &a) {
  const FormHistory history = form_history_from_json(load_json(a.history));
  const FitnessParams params =
      a.fitness.empty() ? FitnessParams{} : fitness_params_from_json(load_json(a.fitness), "fitness");
  const FitnessReport report = evaluate(history, params);
  std::cout << to_json(report).dump(2) << "\n";
  if (a.threshold_opt->count() > 0 && !(report.printability >= a.threshold)) {
    std::cerr << "growform: printability " << report.printability << " is below threshold " << a.threshold << "\n";
    return kThreshold;
  }
  return kOk;
}

// ---------------------------------------------------------------- explore / refine

struct EvolveArgs {
  std::string config, profile = "paper", out, reference;
  std::uint64_t seed = 0;
  int generations = 0, lambda = 0, mu = 0, steps = 0, jobs = 1, stop_after = -1;
  double sigma = 0.0, step_size = 0.0, w_p = 0.0, w_c = 0.0;
  bool resume = false;
  std::map<std::string, CLI::Option *> opts;

  bool given(const std::string &name) const { return opts.at(name)->count() > 0; }
};

void apply_overrides(EvolutionConfig &c, const EvolveArgs &a) {
  if (a.given("generations")) c.generations = a.generations;
  if (a.given("lambda")) c.lambda = a.lambda;
  if (a.given("mu")) c.mu = a.mu;
  if (a.given("sigma")) c.sigma_init = a.sigma;
  if (a.given("step-size")) c.step_size = a.step_size;
  if (a.given("steps")) c.steps_per_individual = a.steps;
  if (a.given("w-p")) c.w_p = a.w_p;
  if (a.given("w-c")) c.w_c = a.w_c;
  if (a.given("w-p") != a.given("w-c")) {
    if (a.given("w-p")) c.w_c = 1.0 - c.w_p;
    else c.w_p = 1.0 - c.w_c;
  }
}

nlohmann::json manifest_config(const EvolutionConfig &c) {
  nlohmann::json j = to_json(c);
  j.erase("jobs");
  return j;
}

int run_evolve(const EvolveArgs &a, Stage stage) {
  const fs::path out(a.out);
  EvolutionConfig config;
  Manifest manifest;
  std::optional<Checkpoint> resume;

  if (a.resume) {
    if (!fs::exists(out / "manifest.json")) throw UsageError("--resume: no manifest.json in " + out.string());
    manifest = manifest_from_json(load_json((out / "manifest.json").string()));
    if (manifest.command != (stage == Stage::explore ? "explore" : "refine"))
      throw UsageError("--resume: " + out.string() + " holds a '" + manifest.command + "' run");
    config = evolution_config_from_json(manifest.config, "manifest.config");
    if (manifest.status == "complete") {
      std::cout << "run in " << out.string() << " is already complete\n";
      return kOk;
    }
    if (fs::exists(out / "checkpoint.json")) resume = checkpoint_from_json(load_json((out / "checkpoint.json").string()));
  } else {
    nlohmann::json file = a.config.empty() ? nlohmann::json::object() : load_json(a.config);
    if (!file.contains("stage")) file["stage"] = stage == Stage::explore ? "explore" : "refine";
    if (!file.contains("profile") && a.profile != "paper") file["profile"] = a.profile;
    const bool seed_in_file = file.contains("master_seed");

    if (stage == Stage::refine) {
      if (a.reference.empty()) throw UsageError("refine requires --reference CHAMPION.json");
      const ChampionRecord ref = champion_record_from_json(load_json(a.reference), "reference");
      if (!file.contains("sim")) file["sim"] = to_json(ref.sim);
      if (!file.contains("steps_per_individual")) file["steps_per_individual"] = ref.steps;
      if (!file.contains("complexity_a")) file["complexity_a"] = ref.complexity_a;
      if (!file.contains("min_diameter_threshold")) file["min_diameter_threshold"] = ref.min_diameter_threshold;
      file["reference"] = to_json(ref.champion.genome);
      file["reference_env_seed"] = ref.champion.env_seed;
      file["reference_printability"] = ref.champion.printability;
      file["reference_complexity"] = ref.champion.complexity;
      manifest.inputs = {{"reference", a.reference}};
    }
    config = evolution_config_from_json(file, a.config.empty() ? "config" : a.config);
    apply_overrides(config, a);
    const SeedChoice seed =
        resolve_seed(a.opts.at("seed"), a.seed, seed_in_file ? std::optional(config.master_seed) : std::nullopt);
    config.master_seed = seed.value;
    validate(config);
    manifest.command = stage == Stage::explore ? "explore" : "refine";
    manifest.seed = seed.value;
    manifest.seed_source = seed.source;
    manifest.config = manifest_config(config);
    if (!a.config.empty()) manifest.inputs["config"] = a.config;
  }
  config.jobs = a.jobs;

  fs::create_directories(out);
  manifest.status = "running";
  manifest.outputs.clear();
  write_file_atomic(out / "manifest.json", to_json(manifest).dump(2) + "\n");

  RunHooks hooks;
  hooks.stop_after = a.stop_after;
  hooks.on_checkpoint = [&](const Checkpoint &c) {
    write_file_atomic(out / "checkpoint.json", to_json(c).dump() + "\n");
    if (c.next_generation % 10 == 0 || c.next_generation > config.generations)
      std::cerr << "generation " << c.next_generation - 1 << ": best so far "
                << c.log.records.back().best_so_far_fitness << "\n";
  };
  const RunLog log = stage == Stage::explore ? explore(config, hooks, resume) : refine(config, hooks, resume);

  const int next = log.records.empty() ? 0 : log.records.back().generation + 1;
  if (next <= config.generations) {
    std::cout << "stopped after generation " << next - 1 << "; continue with --resume --out " << out.string()
              << "\n";
    return kOk;
  }
  manifest.status = "complete";
  write_outputs(out, run_artifacts(log, config), manifest);
  const auto &last = log.records.back();
  std::cout << manifest.command << " finished: best fitness " << last.best_so_far_fitness << " (P "
            << last.best_so_far_p << ", C " << last.best_so_far_c << ")\n";
  return kOk;
}

// ---------------------------------------------------------------- sample / ablate

struct BatchArgs {
  std::string params, out;
  std::uint64_t seed = 0;
  int n = 100, steps = 500, jobs = 1;
  CLI::Option *seed_opt = nullptr;
};

EvolutionConfig batch_config(const BatchArgs &a, std::uint64_t seed) {
  EvolutionConfig c;
  if (!a.params.empty()) c.sim = sim_params_from_json(load_json(a.params), "params");
  c.steps_per_individual = a.steps;
  c.master_seed = seed;
  c.jobs = a.jobs;
  validate(c);
  return c;
}

int run_sample(const BatchArgs &a) {
  if (a.n < 30) throw ConfigError("n", "design-space sampling needs n >= 30");
  const SeedChoice seed = resolve_seed(a.seed_opt, a.seed, std::nullopt);
  const EvolutionConfig config = batch_config(a, seed.value);
  const DesignSpaceReport report = sample_design_space(a.n, config);

  std::string csv = "index,env_seed,eta,nu,eps_max,k,rho,printability,complexity\n";
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const auto &s = report.samples[i];
    char buf[512];
    std::snprintf(buf, sizeof buf, "%zu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                  static_cast<unsigned long long>(s.env_seed), s.genome.eta, s.genome.nu, s.genome.eps_max,
                  s.genome.k, s.genome.rho, s.printability, s.complexity);
    csv += buf;
  }
  Manifest m;
  m.command = "sample";
  m.seed = seed.value;
  m.seed_source = seed.source;
  m.config = {{"n", a.n}, {"steps", a.steps}, {"sim", to_json(config.sim)}, {"search_box", to_json(config.search_box)}};
  write_outputs(a.out, {{"sample.json", to_json(report).dump(2) + "\n"}, {"samples.csv", csv}}, m);
  std::printf("P: mean %.4f sd %.4f median %.4f\nC: mean %.4f sd %.4f median %.4f\n", report.printability.mean,
              report.printability.stddev, report.printability.median, report.complexity.mean,
              report.complexity.stddev, report.complexity.median);
  return kOk;
}

int run_ablate(const BatchArgs &a) {
  const SeedChoice seed = resolve_seed(a.seed_opt, a.seed, std::nullopt);
  const EvolutionConfig config = batch_config(a, seed.value);
  const AblationReport report = ablate(a.n, seed.value, config);
  const std::string table = ablation_table_csv(report);
  Manifest m;
  m.command = "ablate";
  m.seed = seed.value;
  m.seed_source = seed.source;
  m.config = {{"n", a.n}, {"steps", a.steps}, {"sim", to_json(config.sim)}, {"search_box", to_json(config.search_box)}};
  write_outputs(a.out, {{"ablation.json", to_json(report).dump(2) + "\n"}, {"ablation.csv", table}}, m);
  std::cout << table;
  return kOk;
}

// ---------------------------------------------------------------- export

struct ExportArgs {
  std::string history, printer = "generic-0.4", profile, fitness, out, svg_layers;
  int overlay_every = 10;
  double env_size = 600.0;
};

int run_export(const ExportArgs &a) {
  const FormHistory history = form_history_from_json(load_json(a.history));
  const PrinterProfile profile =
      a.profile.empty() ? bundled_profile(a.printer) : printer_profile_from_json(load_json(a.profile), "profile");
  const FitnessParams fitness =
      a.fitness.empty() ? FitnessParams{} : fitness_params_from_json(load_json(a.fitness), "fitness");

  std::map<std::string, std::string> files;
  files["form.gcode"] = emit_gcode(history, profile, a.env_size);
  SvgOptions svg;
  svg.env_size = a.env_size;
  if (a.overlay_every < 1) throw ConfigError("overlay-every", "must be >= 1");
  files["overlay.svg"] =
      emit_overlay_svg(history, 0, history.layers.size() - 1, static_cast<std::size_t>(a.overlay_every), svg);
  files["layer_scores.csv"] = emit_layer_series_csv(evaluate(history, fitness));
  if (!a.svg_layers.empty()) {
    const auto colon = a.svg_layers.find(':');
    std::size_t first = 0, last = 0;
    try {
      first = std::stoul(a.svg_layers.substr(0, colon));
      last = colon == std::string::npos ? first : std::stoul(a.svg_layers.substr(colon + 1));
    } catch (const std::logic_error &) {
      throw ConfigError("svg-layers", "expected FIRST or FIRST:LAST");
    }
    try {
      const auto docs = emit_layer_svg(history, first, last, svg);
      for (std::size_t i = 0; i < docs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "layer_%04zu.svg", first + i);
        files[name] = docs[i];
      }
    } catch (const std::out_of_range &e) {
      throw ConfigError("svg-layers", e.what());
    }
  }
  Manifest m;
  m.command = "export";
  m.config = {{"profile", to_json(profile)}, {"fitness", to_json(fitness)}, {"overlay_every", a.overlay_every},
              {"svg_layers", a.svg_layers}, {"env_size", a.env_size}};
  m.inputs = {{"history", a.history}};
  m.seed_source = "none";
  write_outputs(a.out, files, m);
  std::cout << "wrote " << files.size() << " files to " << a.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"growform: grow, score, evolve and export differential-growth forms for FDM printing"};
  app.set_version_flag("--version", std::string("growform ") + kToolVersion);
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  GrowArgs grow_args;
  auto *grow_cmd = app.add_subcommand("grow", "Grow one colony and write its layer stack");
  grow_cmd->add_option("--genome", grow_args.genome, "Genome JSON")->required()->check(CLI::ExistingFile);
  grow_cmd->add_option("--params", grow_args.params, "Simulation parameter JSON (defaults if omitted)")
      ->check(CLI::ExistingFile);
  grow_args.seed_opt = grow_cmd->add_option("--seed", grow_args.seed, "Environment seed (entropy if omitted)");
  grow_cmd->add_option("--steps", grow_args.steps, "Timesteps, one layer each (at most 1000)");
  grow_cmd->add_option("--out", grow_args.out, "Output directory")->required();
  grow_cmd->add_flag("--preview", grow_args.preview, "Also write an overlay SVG preview");

  ScoreArgs score_args;
  auto *score_cmd = app.add_subcommand("score", "Score a layer stack; prints a fitness report as JSON");
  score_cmd->add_option("--history", score_args.history, "FormHistory JSON")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--fitness", score_args.fitness, "Fitness parameter JSON")->check(CLI::ExistingFile);
  score_args.threshold_opt =
      score_cmd->add_option("--threshold", score_args.threshold, "Exit with code 3 when printability is below this");

  auto add_evolve = [&](const char *name, const char *help, EvolveArgs &a, bool refine) {
    auto *cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", a.config, "Evolution config JSON")->check(CLI::ExistingFile);
    cmd->add_option("--profile", a.profile, "Scale preset: paper or desk (lambda 16, 50 generations, 150 steps)")
        ->check(CLI::IsMember({"paper", "desk"}));
    if (refine)
      cmd->add_option("--reference", a.reference, "Champion JSON from an explore run")->check(CLI::ExistingFile);
    a.opts["seed"] = cmd->add_option("--seed", a.seed, "Master seed (entropy if omitted)");
    const EvolutionConfig d = refine ? EvolutionConfig::refine_defaults() : EvolutionConfig::explore_defaults();
    a.generations = d.generations;
    a.lambda = d.lambda;
    a.mu = d.mu;
    a.sigma = d.sigma_init;
    a.step_size = d.step_size;
    a.steps = d.steps_per_individual;
    a.w_p = d.w_p;
    a.w_c = d.w_c;
    a.opts["generations"] = cmd->add_option("--generations", a.generations, "Generations after the initial one");
    a.opts["lambda"] = cmd->add_option("--lambda", a.lambda, "Population size");
    a.opts["mu"] = cmd->add_option("--mu", a.mu, "Parents per generation");
    a.opts["sigma"] = cmd->add_option("--sigma", a.sigma, "Initial sampling deviation in the unit genome box");
    a.opts["step-size"] = cmd->add_option("--step-size", a.step_size, "CMA-ES learning rate");
    a.opts["steps"] = cmd->add_option("--steps", a.steps, "Timesteps per individual");
    a.opts["w-p"] = cmd->add_option("--w-p", a.w_p, "Printability weight");
    a.opts["w-c"] = cmd->add_option("--w-c", a.w_c, "Complexity weight");
    cmd->add_option("--jobs", a.jobs, "Parallel evaluations")->check(CLI::PositiveNumber);
    cmd->add_option("--out", a.out, "Run directory")->required();
    cmd->add_flag("--resume", a.resume, "Continue the interrupted run in --out");
    cmd->add_option("--stop-after", a.stop_after, "Stop after this many generations (-1 runs to completion)");
    return cmd;
  };
  EvolveArgs explore_args, refine_args;
  auto *explore_cmd = add_evolve("explore", "CMA-ES exploration under a fresh environment seed", explore_args, false);
  auto *refine_cmd = add_evolve("refine", "Local CMA-ES search around an archived champion", refine_args, true);

  auto add_batch = [&](const char *name, const char *help, BatchArgs &a, int n) {
    auto *cmd = app.add_subcommand(name, help);
    a.n = n;
    cmd->add_option("--n", a.n, "Individuals");
    cmd->add_option("--steps", a.steps, "Timesteps per individual");
    a.seed_opt = cmd->add_option("--seed", a.seed, "Master seed (entropy if omitted)");
    cmd->add_option("--params", a.params, "Simulation parameter JSON")->check(CLI::ExistingFile);
    cmd->add_option("--jobs", a.jobs, "Parallel evaluations")->check(CLI::PositiveNumber);
    cmd->add_option("--out", a.out, "Output directory")->required();
    return cmd;
  };
  BatchArgs sample_args, ablate_args;
  auto *sample_cmd = add_batch("sample", "Grow and score uniform random genomes", sample_args, 100);
  auto *ablate_cmd = add_batch("ablate", "Compare output spread with model components switched off", ablate_args, 100);

  ExportArgs export_args;
  auto *export_cmd = app.add_subcommand("export", "Write G-code, SVG previews and per-layer scores");
  export_cmd->add_option("--history", export_args.history, "FormHistory JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--printer", export_args.printer, "Bundled profile: generic-0.4 or large-format-600");
  export_cmd->add_option("--profile", export_args.profile, "Printer profile JSON (overrides --printer)")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--fitness", export_args.fitness, "Fitness parameter JSON for layer scores")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--svg-layers", export_args.svg_layers, "Also write per-layer SVGs for FIRST[:LAST]");
  export_cmd->add_option("--overlay-every", export_args.overlay_every, "Layer stride of the overlay preview");
  export_cmd->add_option("--env-size", export_args.env_size, "Environment extent in simulation units");
  export_cmd->add_option("--out", export_args.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (grow_cmd->parsed()) return run_grow(grow_args);
    if (score_cmd->parsed()) return run_score(score_args);
    if (explore_cmd->parsed()) return run_evolve(explore_args, Stage::explore);
    if (refine_cmd->parsed()) {
      if (!refine_args.resume && refine_args.reference.empty()) {
        std::cerr << "growform refine: --reference is required\n" << refine_cmd->help();
        return kUsage;
      }
      return run_evolve(refine_args, Stage::refine);
    }
    if (sample_cmd->parsed()) return run_sample(sample_args);
    if (ablate_cmd->parsed()) return run_ablate(ablate_args);
    if (export_cmd->parsed()) return run_export(export_args);
  } catch (const ConfigError &e) {
    std::cerr << "growform: config error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError &e) {
    std::cerr << "growform: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "growform: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
