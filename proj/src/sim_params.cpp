#include "growform/sim_params.hpp"

#include <cmath>

#include "growform/json_fields.hpp"

namespace growform {

namespace {

// Single table drives serialization in both directions.
template <typename Visitor>
void visit_fields(SimParams &p, Visitor &&v) {
  v("r_r", p.r_r);
  v("k_r", p.k_r);
  v("k_s", p.k_s);
  v("dt", p.dt);
  v("c_m", p.c_m);
  v("mass_floor", p.mass_floor);
  v("c_l", p.c_l);
  v("max_speed", p.max_speed);
  v("d_min_clamp", p.d_min_clamp);
  v("eps_floor", p.eps_floor);
  v("eps_init", p.eps_init);
  v("c1", p.c1);
  v("c2", p.c2);
  v("chi", p.chi);
  v("omega", p.omega);
  v("f_attr", p.f_attr);
  v("c_F", p.c_F);
  v("sense_radius", p.sense_radius);
  v("a_max", p.a_max);
  v("nutrient_yield", p.nutrient_yield);
  v("env_size", p.env_size);
  v("grid_size", p.grid_size);
  v("n_sources", p.n_sources);
  v("source_alpha", p.source_alpha);
  v("source_beta_min", p.source_beta_min);
  v("source_beta_max", p.source_beta_max);
  v("gamma", p.gamma);
  v("c_n", p.c_n);
  v("init_radius", p.init_radius);
  v("layer_height_mm", p.layer_height_mm);
  v("units_to_mm", p.units_to_mm);
}

}  // namespace

void validate(const SimParams &p, const std::string &path) {
  auto positive = [&](double v, const char *name) {
    if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(path + "." + name, "must be finite and > 0");
  };
  auto nonneg = [&](double v, const char *name) {
    if (!(std::isfinite(v) && v >= 0.0)) throw ConfigError(path + "." + name, "must be finite and >= 0");
  };
  positive(p.r_r, "r_r");
  nonneg(p.k_r, "k_r");
  positive(p.k_s, "k_s");
  positive(p.dt, "dt");
  nonneg(p.c_m, "c_m");
  positive(p.mass_floor, "mass_floor");
  positive(p.c_l, "c_l");
  positive(p.max_speed, "max_speed");
  positive(p.d_min_clamp, "d_min_clamp");
  positive(p.eps_floor, "eps_floor");
  positive(p.eps_init, "eps_init");
  nonneg(p.c1, "c1");
  nonneg(p.c2, "c2");
  nonneg(p.chi, "chi");
  nonneg(p.omega, "omega");
  nonneg(p.f_attr, "f_attr");
  nonneg(p.c_F, "c_F");
  positive(p.sense_radius, "sense_radius");
  nonneg(p.a_max, "a_max");
  nonneg(p.nutrient_yield, "nutrient_yield");
  positive(p.env_size, "env_size");
  if (p.grid_size < 1) throw ConfigError(path + ".grid_size", "must be >= 1");
  if (p.n_sources < 0) throw ConfigError(path + ".n_sources", "must be >= 0");
  nonneg(p.source_alpha, "source_alpha");
  positive(p.source_beta_min, "source_beta_min");
  if (!(p.source_beta_max >= p.source_beta_min))
    throw ConfigError(path + ".source_beta_max", "must be >= source_beta_min");
  nonneg(p.gamma, "gamma");
  nonneg(p.c_n, "c_n");
  positive(p.init_radius, "init_radius");
  if (p.init_radius * 2.0 >= p.env_size) throw ConfigError(path + ".init_radius", "initial ring exceeds the environment");
  positive(p.layer_height_mm, "layer_height_mm");
  positive(p.units_to_mm, "units_to_mm");
  if (p.chi > 0.5) throw ConfigError(path + ".chi", "must be <= 0.5 for a stable diffusion step");
}

nlohmann::json to_json(const SimParams &p) {
  nlohmann::json j = nlohmann::json::object();
  SimParams copy = p;
  visit_fields(copy, [&](const char *key, auto &value) { j[key] = value; });
  j["flags"] = to_json(p.flags);
  return j;
}

SimParams sim_params_from_json(const nlohmann::json &j, const std::string &path) {
  SimParams p;
  detail::FieldReader r(j, path);
  visit_fields(p, [&](const char *key, auto &value) { r.optional(key, value); });
  if (const auto *flags = r.child("flags")) p.flags = model_flags_from_json(*flags, r.path_of("flags"));
  r.finish();
  validate(p, path);
  return p;
}

nlohmann::json to_json(const ModelFlags &f) {
  return {{"no_energy", f.no_energy}, {"no_division", f.no_division}, {"no_meta", f.no_meta}, {"no_physics", f.no_physics}};
}

ModelFlags model_flags_from_json(const nlohmann::json &j, const std::string &path) {
  ModelFlags f;
  detail::FieldReader r(j, path);
  r.optional("no_energy", f.no_energy);
  r.optional("no_division", f.no_division);
  r.optional("no_meta", f.no_meta);
  r.optional("no_physics", f.no_physics);
  r.finish();
  return f;
}

}  // namespace growform
