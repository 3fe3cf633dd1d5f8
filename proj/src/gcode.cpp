#include "growform/gcode.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "growform/config_error.hpp"
#include "growform/json_fields.hpp"

namespace growform {

namespace {

template <typename F>
void visit_fields(PrinterProfile &p, F &&v) {
  v("name", p.name);
  v("plate_width", p.plate_width);
  v("plate_depth", p.plate_depth);
  v("max_height", p.max_height);
  v("nozzle_diameter", p.nozzle_diameter);
  v("filament_diameter", p.filament_diameter);
  v("line_width", p.line_width);
  v("layer_height", p.layer_height);
  v("travel_speed", p.travel_speed);
  v("extrude_speed", p.extrude_speed);
  v("retract_length", p.retract_length);
  v("retract_speed", p.retract_speed);
  v("nozzle_temperature", p.nozzle_temperature);
  v("bed_temperature", p.bed_temperature);
  v("start_gcode", p.start_gcode);
  v("end_gcode", p.end_gcode);
}

// Fixed five-decimal formatting without negative zero.
std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  std::string s = buf;
  if (s.rfind("-0.00000", 0) == 0 && s.size() == 8) s.erase(0, 1);
  return s;
}

void append_block(std::string &out, const std::string &block) {
  if (block.empty()) return;
  out += block;
  if (block.back() != '\n') out += '\n';
}

}  // namespace

void validate(const PrinterProfile &p, const std::string &path) {
  auto positive = [&](double v, const char *key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path + "." + key, "must be > 0");
  };
  positive(p.plate_width, "plate_width");
  positive(p.plate_depth, "plate_depth");
  positive(p.max_height, "max_height");
  positive(p.nozzle_diameter, "nozzle_diameter");
  positive(p.filament_diameter, "filament_diameter");
  positive(p.line_width, "line_width");
  positive(p.layer_height, "layer_height");
  positive(p.travel_speed, "travel_speed");
  positive(p.extrude_speed, "extrude_speed");
  positive(p.retract_speed, "retract_speed");
  if (!(p.retract_length >= 0.0)) throw ConfigError(path + ".retract_length", "must be >= 0");
  if (p.layer_height > p.nozzle_diameter)
    throw ConfigError(path + ".layer_height", "must not exceed nozzle_diameter");
}

nlohmann::json to_json(const PrinterProfile &p) {
  nlohmann::json j = nlohmann::json::object();
  visit_fields(const_cast<PrinterProfile &>(p), [&](const char *key, const auto &value) { j[key] = value; });
  return j;
}

PrinterProfile printer_profile_from_json(const nlohmann::json &j, const std::string &path) {
  PrinterProfile p;
  detail::FieldReader r(j, path);
  visit_fields(p, [&](const char *key, auto &value) { r.optional(key, value); });
  r.finish();
  validate(p, path);
  return p;
}

PrinterProfile bundled_profile(const std::string &name) {
  PrinterProfile p;
  if (name == "generic-0.4") return p;
  if (name == "large-format-600") {
    p.name = name;
    p.plate_width = 600.0;
    p.plate_depth = 600.0;
    p.max_height = 600.0;
    p.nozzle_diameter = 0.8;
    p.filament_diameter = 2.85;
    p.line_width = 0.8;
    p.layer_height = 0.4;
    p.travel_speed = 6000.0;
    p.extrude_speed = 1200.0;
    p.retract_length = 2.0;
    p.retract_speed = 1800.0;
    p.nozzle_temperature = 220.0;
    p.bed_temperature = 50.0;
    return p;
  }
  throw ConfigError("profile", "unknown bundled profile '" + name + "' (expected generic-0.4 or large-format-600)");
}

double extrusion_for(double length, const PrinterProfile &p) {
  const double radius = 0.5 * p.filament_diameter;
  return length * (p.line_width * p.layer_height) / (std::numbers::pi * radius * radius);
}

Vec2 to_plate(Vec2 p, double units_to_mm, double env_size, const PrinterProfile &profile) {
  const double c = 0.5 * env_size;
  return {(p.x - c) * units_to_mm + 0.5 * profile.plate_width, (p.y - c) * units_to_mm + 0.5 * profile.plate_depth};
}

std::string emit_gcode(const FormHistory &history, const PrinterProfile &profile, double env_size) {
  validate(profile);
  const double top = static_cast<double>(history.layers.size()) * profile.layer_height;
  if (top > profile.max_height + 1e-9)
    throw GcodeBoundsError(std::to_string(history.layers.size()) + " layers reach " + num(top) +
                           " mm, above the printer's max height of " + num(profile.max_height) + " mm");

  std::string offenders;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < history.layers.size(); ++i)
    for (std::size_t j = 0; j < history.layers[i].size(); ++j)
      for (std::size_t k = 0; k < history.layers[i][j].size(); ++k) {
        const Vec2 q = to_plate(history.layers[i][j][k], history.units_to_mm, env_size, profile);
        if (q.x < 0.0 || q.x > profile.plate_width || q.y < 0.0 || q.y > profile.plate_depth) {
          if (bad++ < 10)
            offenders += "\n  layer " + std::to_string(i) + " polyline " + std::to_string(j) + " vertex " +
                         std::to_string(k) + " at (" + num(q.x) + ", " + num(q.y) + ")";
        }
      }
  if (bad > 0)
    throw GcodeBoundsError(std::to_string(bad) + " vertices fall outside the " + num(profile.plate_width) + " x " +
                           num(profile.plate_depth) + " mm plate:" + offenders + (bad > 10 ? "\n  ..." : ""));

  std::string out;
  out += "; growform toolpath\n";
  out += "; profile: " + profile.name + "\n";
  out += "; layers: " + std::to_string(history.layers.size()) + "\n";
  out += "M140 S" + num(profile.bed_temperature) + "\n";
  out += "M104 S" + num(profile.nozzle_temperature) + "\n";
  out += "M190 S" + num(profile.bed_temperature) + "\n";
  out += "M109 S" + num(profile.nozzle_temperature) + "\n";
  append_block(out, profile.start_gcode);
  out += "M82\nG92 E0\n";

  const std::string travel_f = " F" + num(profile.travel_speed);
  const std::string extrude_f = " F" + num(profile.extrude_speed);
  const std::string retract_f = " F" + num(profile.retract_speed);
  double e = 0.0;
  for (std::size_t i = 0; i < history.layers.size(); ++i) {
    out += "; layer " + std::to_string(i) + "\n";
    out += "G0 Z" + num(static_cast<double>(i + 1) * profile.layer_height) + travel_f + "\n";
    for (const auto &poly : history.layers[i]) {
      if (poly.empty()) continue;
      const Vec2 first = to_plate(poly.front(), history.units_to_mm, env_size, profile);
      if (profile.retract_length > 0.0) out += "G1 E" + num(e - profile.retract_length) + retract_f + "\n";
      out += "G0 X" + num(first.x) + " Y" + num(first.y) + travel_f + "\n";
      if (profile.retract_length > 0.0) out += "G1 E" + num(e) + retract_f + "\n";
      Vec2 prev = first;
      bool first_move = true;
      for (std::size_t k = 1; k <= poly.size(); ++k) {
        const Vec2 q = to_plate(poly[k % poly.size()], history.units_to_mm, env_size, profile);
        e += extrusion_for(distance(prev, q), profile);
        out += "G1 X" + num(q.x) + " Y" + num(q.y) + " E" + num(e);
        if (first_move) out += extrude_f;
        out += "\n";
        first_move = false;
        prev = q;
      }
    }
  }
  append_block(out, profile.end_gcode);
  return out;
}

}  // namespace growform
