#include "growform/form_history.hpp"

#include <cmath>

#include "growform/json_fields.hpp"
#include "growform/sim_params.hpp"

namespace growform {

std::size_t FormHistory::edge_count() const {
  std::size_t n = 0;
  for (const auto &layer : layers)
    for (const auto &poly : layer) n += poly.size();
  return n;
}

nlohmann::json to_json(const FormHistory &h) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto &layer : h.layers) {
    nlohmann::json jl = nlohmann::json::array();
    for (const auto &poly : layer) {
      nlohmann::json jp = nlohmann::json::array();
      for (const auto &v : poly) jp.push_back({v.x, v.y});
      jl.push_back(std::move(jp));
    }
    layers.push_back(std::move(jl));
  }
  return {{"version", FormHistory::kVersion},
          {"layer_height_mm", h.layer_height_mm},
          {"units_to_mm", h.units_to_mm},
          {"layers", std::move(layers)}};
}

FormHistory form_history_from_json(const nlohmann::json &j) {
  FormHistory h;
  detail::FieldReader r(j, "history");
  int version = 0;
  r.required("version", version);
  if (version != FormHistory::kVersion)
    throw ConfigError("history.version", "unsupported version " + std::to_string(version));
  r.required("layer_height_mm", h.layer_height_mm);
  r.required("units_to_mm", h.units_to_mm);
  if (!(h.layer_height_mm > 0.0)) throw ConfigError("history.layer_height_mm", "must be > 0");
  if (!(h.units_to_mm > 0.0)) throw ConfigError("history.units_to_mm", "must be > 0");
  const auto *layers = r.child("layers");
  if (!layers || !layers->is_array()) throw ConfigError("history.layers", "expected an array");
  r.finish();
  if (layers->size() > static_cast<std::size_t>(kMaxLayers))
    throw ConfigError("history.layers", "exceeds the " + std::to_string(kMaxLayers) + "-layer cap");

  for (std::size_t li = 0; li < layers->size(); ++li) {
    const auto &jl = (*layers)[li];
    const std::string lpath = "history.layers[" + std::to_string(li) + "]";
    if (!jl.is_array()) throw ConfigError(lpath, "expected an array of polylines");
    Layer layer;
    for (std::size_t pi = 0; pi < jl.size(); ++pi) {
      const auto &jp = jl[pi];
      const std::string ppath = lpath + "[" + std::to_string(pi) + "]";
      if (!jp.is_array() || jp.size() < 3) throw ConfigError(ppath, "polyline needs at least 3 vertices");
      Polyline poly;
      for (std::size_t vi = 0; vi < jp.size(); ++vi) {
        const auto &jv = jp[vi];
        if (!jv.is_array() || jv.size() != 2 || !jv[0].is_number() || !jv[1].is_number())
          throw ConfigError(ppath + "[" + std::to_string(vi) + "]", "expected [x, y]");
        const Vec2 v{jv[0].get<double>(), jv[1].get<double>()};
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
          throw ConfigError(ppath + "[" + std::to_string(vi) + "]", "non-finite coordinate");
        poly.push_back(v);
      }
      layer.push_back(std::move(poly));
    }
    h.layers.push_back(std::move(layer));
  }
  return h;
}

std::string dump_form_history(const FormHistory &h) { return to_json(h).dump(); }

}  // namespace growform
