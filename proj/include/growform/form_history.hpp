#pragma once

#include <string>
#include <vector>

#include "growform/geometry.hpp"
#include "json.hpp"

namespace growform {

/// Per-timestep organism outlines; stacked, they are the printed form.
/// Vertices are in environment units.
struct FormHistory {
  static constexpr int kVersion = 1;

  std::vector<Layer> layers;
  double layer_height_mm = 0.2;
  double units_to_mm = 0.35;

  std::size_t edge_count() const;
  /// Layer height expressed in environment units.
  double layer_height_units() const { return layer_height_mm / units_to_mm; }

  friend bool operator==(const FormHistory &, const FormHistory &) = default;
};

/// {version, layer_height_mm, units_to_mm, layers: [[[[x, y], ...], ...], ...]}
/// layers[i][j] is the j-th closed polyline of layer i (closing vertex not
/// repeated).
nlohmann::json to_json(const FormHistory &h);
FormHistory form_history_from_json(const nlohmann::json &j);

/// Serializes with full double precision; output is byte-stable.
std::string dump_form_history(const FormHistory &h);

}  // namespace growform
