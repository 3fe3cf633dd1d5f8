#include "growform/ablation.hpp"

#include <cmath>
#include <cstdio>

#include "growform/colony.hpp"
#include "growform/config_error.hpp"
#include "growform/rng.hpp"

namespace growform {

namespace {

double layer_area_mm2(const Layer &layer, double units_to_mm) {
  double area = 0.0;
  for (const auto &poly : layer) area += std::abs(signed_area(poly));
  return area * units_to_mm * units_to_mm;
}

double sample_stddev(const std::vector<double> &v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string format_ratio(const std::optional<double> &r) {
  if (!r) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *r);
  return buf;
}

}  // namespace

double form_volume(const FormHistory &history) {
  double v = 0.0;
  for (const auto &layer : history.layers) v += layer_area_mm2(layer, history.units_to_mm);
  return v * history.layer_height_mm;
}

double volume_variation(const FormHistory &history) {
  std::vector<double> per_layer;
  per_layer.reserve(history.layers.size());
  for (const auto &layer : history.layers)
    per_layer.push_back(layer_area_mm2(layer, history.units_to_mm) * history.layer_height_mm);
  if (per_layer.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : per_layer) mean += x;
  mean /= static_cast<double>(per_layer.size());
  double ss = 0.0;
  for (double x : per_layer) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(per_layer.size()));
}

std::vector<std::pair<std::string, ModelFlags>> ablation_conditions() {
  return {{"full model", ModelFlags{}},
          {"no energy", ModelFlags{.no_energy = true}},
          {"no division", ModelFlags{.no_division = true}},
          {"no meta", ModelFlags{.no_meta = true}},
          {"no physics", ModelFlags{.no_physics = true}}};
}

AblationReport ablate(int n, std::uint64_t seed, const EvolutionConfig &config) {
  if (n < 2) throw ConfigError("n", "must be >= 2");
  AblationReport report;
  report.n = n;
  report.seed = seed;

  std::vector<Genome> genomes(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> env_seeds(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::array<double, Genome::kAlleles> unit{};
    for (auto &u : unit) u = rng.uniform();
    genomes[static_cast<std::size_t>(i)] = config.search_box.denormalize(unit);
    env_seeds[static_cast<std::size_t>(i)] = rng.next_u64();
  }

  const FitnessParams fitness = config.fitness_params();
  for (const auto &[name, flags] : ablation_conditions()) {
    AblationRow row;
    row.condition = name;
    row.flags = flags;
    row.individuals.resize(static_cast<std::size_t>(n));
    SimParams sim = config.sim;
    sim.flags = flags;
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.jobs)
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const FormHistory h = grow(genomes[k], sim, env_seeds[k], config.steps_per_individual);
      const FitnessReport r = evaluate(h, fitness);
      row.individuals[k] = {r.printability, r.complexity, form_volume(h), volume_variation(h)};
    }
    std::array<std::vector<double>, 4> columns;
    for (const auto &m : row.individuals) {
      columns[0].push_back(m.printability);
      columns[1].push_back(m.complexity);
      columns[2].push_back(m.volume);
      columns[3].push_back(m.volume_variation);
    }
    for (std::size_t c = 0; c < 4; ++c) row.sigma[c] = sample_stddev(columns[c]);
    report.rows.push_back(std::move(row));
  }

  const auto &full = report.rows.front().sigma;
  for (auto &row : report.rows)
    for (std::size_t c = 0; c < 4; ++c)
      if (full[c] > 0.0) row.ratio[c] = row.sigma[c] / full[c];
  return report;
}

nlohmann::json to_json(const AblationReport &r) {
  static const char *kColumns[4] = {"sigma_P", "sigma_C", "sigma_V", "sigma_D"};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &row : r.rows) {
    nlohmann::json sigma, ratio;
    for (std::size_t c = 0; c < 4; ++c) {
      sigma[kColumns[c]] = row.sigma[c];
      ratio[kColumns[c]] = row.ratio[c] ? nlohmann::json(*row.ratio[c]) : nlohmann::json(nullptr);
    }
    rows.push_back({{"condition", row.condition}, {"flags", to_json(row.flags)}, {"sigma", sigma}, {"ratio", ratio}});
  }
  return {{"n", r.n}, {"seed", r.seed}, {"rows", rows}};
}

std::string ablation_table_csv(const AblationReport &r) {
  std::string out = "condition,sigma_P,sigma_C,sigma_V,sigma_D\n";
  for (const auto &row : r.rows) {
    out += row.condition;
    for (const auto &ratio : row.ratio) out += "," + format_ratio(ratio);
    out += "\n";
  }
  return out;
}

}  // namespace growform
