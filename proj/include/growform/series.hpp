#pragma once

#include <array>
#include <string>
#include <vector>

#include "growform/evolve.hpp"
#include "growform/fitness.hpp"

namespace growform {

/// Column order of the per-generation CSV.
inline constexpr std::array<const char *, 10> kGenerationColumns = {
    "generation",  "best_P", "best_C",           "best_fitness",         "mean_fitness",
    "sigma",       "cov_trace", "best_so_far_P", "best_so_far_C", "best_so_far_fitness"};

/// Header plus one row per generation; doubles are written with 17
/// significant digits so parsing restores them exactly.
std::string emit_series_csv(const RunLog &log);

/// Parses emit_series_csv output. Genome fields are left default.
std::vector<GenerationRecord> parse_series_csv(const std::string &csv);

/// One row per layer: layer, printability, convexity, dispersion,
/// min_diameter_factor.
std::string emit_layer_series_csv(const FitnessReport &report);

}  // namespace growform
