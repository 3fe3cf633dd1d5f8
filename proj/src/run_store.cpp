#include "growform/run_store.hpp"

#include "growform/colony.hpp"
#include "growform/io.hpp"
#include "growform/json_fields.hpp"
#include "growform/series.hpp"

namespace growform {

nlohmann::json to_json(const ChampionRecord &c) {
  return {{"genome", to_json(c.champion.genome)},
          {"env_seed", c.champion.env_seed},
          {"generation", c.champion.generation},
          {"fitness", c.champion.fitness},
          {"printability", c.champion.printability},
          {"complexity", c.champion.complexity},
          {"steps", c.steps},
          {"complexity_a", c.complexity_a},
          {"min_diameter_threshold", c.min_diameter_threshold},
          {"sim", to_json(c.sim)}};
}

ChampionRecord champion_record_from_json(const nlohmann::json &j, const std::string &path) {
  ChampionRecord c;
  detail::FieldReader r(j, path);
  const auto *genome = r.child("genome");
  if (!genome) throw ConfigError(r.path_of("genome"), "missing required field");
  c.champion.genome = genome_from_json(*genome, r.path_of("genome"));
  r.required("env_seed", c.champion.env_seed);
  r.required("printability", c.champion.printability);
  r.required("complexity", c.champion.complexity);
  r.optional("generation", c.champion.generation);
  r.optional("fitness", c.champion.fitness);
  r.required("steps", c.steps);
  r.optional("complexity_a", c.complexity_a);
  r.optional("min_diameter_threshold", c.min_diameter_threshold);
  if (const auto *sim = r.child("sim")) c.sim = sim_params_from_json(*sim, r.path_of("sim"));
  r.finish();
  return c;
}

std::map<std::string, std::string> run_artifacts(const RunLog &log, const EvolutionConfig &config) {
  std::map<std::string, std::string> files;
  files["generations.csv"] = emit_series_csv(log);

  nlohmann::json records = nlohmann::json::array();
  for (const auto &r : log.records) records.push_back(to_json(r));
  nlohmann::json champions = nlohmann::json::array();
  for (const auto &c : log.champions) champions.push_back(to_json(c));
  files["runlog.json"] = nlohmann::json{{"env_seed", log.env_seed},
                                        {"cma_repairs", log.cma_repairs},
                                        {"records", records},
                                        {"champions", champions}}
                             .dump(2) +
                         "\n";

  for (std::size_t i = 0; i < log.champions.size(); ++i) {
    const auto &c = log.champions[i];
    const std::string stem = "champion_" + std::to_string(i + 1);
    ChampionRecord rec{c, config.steps_per_individual, config.sim, config.complexity_a,
                       config.min_diameter_threshold};
    files[stem + ".json"] = to_json(rec).dump(2) + "\n";
    files[stem + ".history.json"] = dump_form_history(grow(c.genome, config.sim, c.env_seed, config.steps_per_individual));
  }
  return files;
}

nlohmann::json to_json(const Manifest &m) {
  return {{"tool", "growform"},     {"version", kToolVersion}, {"command", m.command},
          {"seed", m.seed},         {"seed_source", m.seed_source}, {"config", m.config},
          {"inputs", m.inputs},     {"outputs", m.outputs},    {"status", m.status}};
}

Manifest manifest_from_json(const nlohmann::json &j) {
  Manifest m;
  m.command = j.at("command").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.seed_source = j.at("seed_source").get<std::string>();
  m.config = j.at("config");
  m.inputs = j.at("inputs");
  m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  m.status = j.at("status").get<std::string>();
  return m;
}

void write_outputs(const std::filesystem::path &dir, const std::map<std::string, std::string> &files, Manifest manifest) {
  std::filesystem::create_directories(dir);
  for (const auto &[name, content] : files) {
    write_file_atomic(dir / name, content);
    manifest.outputs[name] = sha256_hex(content);
  }
  write_file_atomic(dir / "manifest.json", to_json(manifest).dump(2) + "\n");
}

}  // namespace growform
