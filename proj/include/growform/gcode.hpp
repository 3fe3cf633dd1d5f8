#pragma once

#include <stdexcept>
#include <string>

#include "growform/form_history.hpp"
#include "json.hpp"

namespace growform {

struct PrinterProfile {
  std::string name = "generic-0.4";
  double plate_width = 220.0;   ///< mm
  double plate_depth = 220.0;   ///< mm
  double max_height = 250.0;    ///< mm
  double nozzle_diameter = 0.4;
  double filament_diameter = 1.75;
  double line_width = 0.4;
  double layer_height = 0.2;
  double travel_speed = 9000.0;   ///< mm/min
  double extrude_speed = 1800.0;  ///< mm/min
  double retract_length = 1.0;    ///< mm of filament, 0 disables
  double retract_speed = 2400.0;  ///< mm/min
  double nozzle_temperature = 210.0;
  double bed_temperature = 60.0;
  std::string start_gcode = "G28\nG90\n";
  std::string end_gcode = "M104 S0\nM140 S0\nG28 X Y\nM84\n";

  friend bool operator==(const PrinterProfile &, const PrinterProfile &) = default;
};

void validate(const PrinterProfile &p, const std::string &path = "profile");
nlohmann::json to_json(const PrinterProfile &p);
PrinterProfile printer_profile_from_json(const nlohmann::json &j, const std::string &path = "profile");

/// "generic-0.4" (220 x 220 x 250 mm, 0.4 mm nozzle) or "large-format-600"
/// (600 x 600 x 600 mm, 0.8 mm nozzle). Throws ConfigError otherwise.
PrinterProfile bundled_profile(const std::string &name);

/// The form does not fit the printer.
class GcodeBoundsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filament length for a printed segment of `length` mm.
double extrusion_for(double length, const PrinterProfile &p);

/// Maps an environment coordinate to plate millimetres, putting the
/// environment centre on the plate centre.
Vec2 to_plate(Vec2 p, double units_to_mm, double env_size, const PrinterProfile &profile);

/// Absolute-XYZ, absolute-E toolpath. Every polyline is printed as a closed
/// loop after a retracted travel to its first vertex. Numbers use five
/// decimals, so equal inputs give byte-identical output.
std::string emit_gcode(const FormHistory &history, const PrinterProfile &profile, double env_size = 600.0);

}  // namespace growform
