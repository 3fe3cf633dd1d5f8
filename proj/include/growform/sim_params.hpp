#pragma once

#include <string>

#include "json.hpp"

namespace growform {

/// Model components that can be switched off for ablation studies.
struct ModelFlags {
  bool no_energy = false;    ///< skip energy loss and cell-to-cell diffusion
  bool no_division = false;  ///< disable cell Divide and organism splitting
  bool no_meta = false;      ///< no absorption or nutrient seeking; loss is c1 only
  bool no_physics = false;   ///< cells never move

  friend bool operator==(const ModelFlags &, const ModelFlags &) = default;
};

/// Every non-genetic constant of the developmental model. Lengths are in
/// environment units, time in timesteps.
struct SimParams {
  // Physics.
  double r_r = 3.0;            ///< repulsion radius
  double k_r = 1.0;            ///< repulsion strength
  double k_s = 1.0;            ///< scale on the genome spring coefficient
  double dt = 1.0;
  double c_m = 1.0;            ///< mass per unit energy
  double mass_floor = 0.1;
  double c_l = 3.2;            ///< rest length = c_l * sqrt(E_tail + E_head)
  double max_speed = 3.0;      ///< displacement cap per timestep
  double d_min_clamp = 1e-3;
  double eps_floor = 1e-3;

  // Energy.
  double eps_init = 5.0;
  double c1 = 1e-3;            ///< cost of living
  double c2 = 0.1;             ///< movement cost constant
  double chi = 0.1;            ///< energy diffusion rate
  double omega = 0.4;          ///< energy lost per unit edge length during diffusion
  double f_attr = 0.5;         ///< attraction between a pending split pair
  double c_F = 1.0;            ///< nutrient force per unit energy
  double sense_radius = 40.0;
  double a_max = 1.0;          ///< nutrient uptake cap per cell per step
  double nutrient_yield = 400.0;  ///< energy gained per unit of absorbed nutrient

  // Environment.
  double env_size = 600.0;
  int grid_size = 15;
  int n_sources = 5;
  double source_alpha = 0.1;
  double source_beta_min = 5.0;
  double source_beta_max = 10.0;
  double gamma = 0.5;          ///< nutrient diffusion rate
  double c_n = 0.005;          ///< nutrient decay per step
  double init_radius = 100.0;

  // Output.
  double layer_height_mm = 0.2;
  double units_to_mm = 0.35;

  ModelFlags flags;

  double eps_org_split() const { return 10.0 * eps_init; }

  friend bool operator==(const SimParams &, const SimParams &) = default;
};

inline constexpr int kMaxLayers = 1000;

void validate(const SimParams &p, const std::string &path = "params");

nlohmann::json to_json(const SimParams &p);
/// Missing keys keep their defaults; unknown keys are rejected.
SimParams sim_params_from_json(const nlohmann::json &j, const std::string &path = "params");

nlohmann::json to_json(const ModelFlags &f);
ModelFlags model_flags_from_json(const nlohmann::json &j, const std::string &path = "flags");

}  // namespace growform
