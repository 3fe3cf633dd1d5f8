#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growform/evolve.hpp"
#include "growform/form_history.hpp"
#include "json.hpp"

namespace growform {

/// Printed volume in mm^3: polygon area of every layer times layer height.
double form_volume(const FormHistory &history);

/// Standard deviation of the per-layer printed volume, mm^3.
double volume_variation(const FormHistory &history);

struct AblationMetrics {
  double printability = 0.0;
  double complexity = 0.0;
  double volume = 0.0;
  double volume_variation = 0.0;
};

struct AblationRow {
  std::string condition;  ///< "full model", "no energy", ...
  ModelFlags flags;
  std::vector<AblationMetrics> individuals;
  std::array<double, 4> sigma{};  ///< sample deviations of P, C, V, D
  /// sigma divided by the full model's sigma; empty when that is zero.
  std::array<std::optional<double>, 4> ratio{};
};

struct AblationReport {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<AblationRow> rows;  ///< full model first, then the four ablations
};

/// The five conditions in report order.
std::vector<std::pair<std::string, ModelFlags>> ablation_conditions();

/// Grows the same n random genomes, each under its own environment seed,
/// once per condition and compares the spread of the four metrics against
/// the full model. Uses config.sim (flags overridden), steps_per_individual,
/// search_box, fitness settings and jobs.
AblationReport ablate(int n, std::uint64_t seed, const EvolutionConfig &config);

nlohmann::json to_json(const AblationReport &r);
/// Table with one row per condition and the four ratio columns.
std::string ablation_table_csv(const AblationReport &r);

}  // namespace growform
