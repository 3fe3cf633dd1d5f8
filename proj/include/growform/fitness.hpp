#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "growform/form_history.hpp"
#include "growform/geometry.hpp"
#include "json.hpp"

namespace growform {

struct FitnessParams {
  double min_diameter_threshold = 10.0;  ///< T, environment units
  double layer_height_mm = 0.2;          ///< h, converted with the history's units_to_mm
  double convexity_weight = 0.5;         ///< a
  double w_p = 0.5;
  double w_c = 0.5;

  friend bool operator==(const FitnessParams &, const FitnessParams &) = default;
};

void validate(const FitnessParams &p, const std::string &path = "fitness");
nlohmann::json to_json(const FitnessParams &p);
FitnessParams fitness_params_from_json(const nlohmann::json &j, const std::string &path = "fitness");

struct LayerScore {
  std::size_t layer = 0;
  double printability = 1.0;  ///< length-weighted support ratio of this layer
  double convexity = 1.0;     ///< mean over the layer's organisms
  double dispersion = 0.0;    ///< mean over the layer's organisms
  double min_diameter_factor = 1.0;  ///< smallest factor among the layer's organisms

  friend bool operator==(const LayerScore &, const LayerScore &) = default;
};

struct FitnessReport {
  double printability = 0.0;
  double complexity = 0.0;
  double convexity = 1.0;    ///< mean X over organism-layers
  double dispersion = 0.0;   ///< mean D over organism-layers
  double fitness = 0.0;      ///< w_p P + w_c C
  bool degenerate = false;
  std::string diagnostic;
  std::vector<LayerScore> per_layer;

  friend bool operator==(const FitnessReport &, const FitnessReport &) = default;
};

nlohmann::json to_json(const FitnessReport &r);
FitnessReport fitness_report_from_json(const nlohmann::json &j);

class DegenerateFormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 when d_min >= T, else d_min / T.
double diameter_factor(double d_min, double threshold);

/// Support score from the distance to the nearest segment of the layer below.
double support_from_distance(double d, double h);

/// Support score of point p against every segment of `below`. An empty
/// `below` (first layer) counts as the build plate and scores 1.
double support_score(Vec2 p, const Layer &below, double h);

/// df (S_start + 2 S_mid + S_end) / 4.
double edge_support_ratio(double s_start, double s_mid, double s_end, double df);

/// Length-weighted mean of per-edge support ratios.
double weighted_printability(std::span<const double> ratios, std::span<const double> lengths);

/// Hull perimeter over polygon perimeter, in (0, 1]. Throws
/// DegenerateFormError for degenerate polygons.
double convexity(std::span<const Vec2> polygon);

/// Interior angle in degrees [0, 360) at every vertex of every polygon,
/// measured on the inside of each ring regardless of its orientation.
std::vector<double> interior_angles(std::span<const Polyline> polygons);

/// Linear-interpolation quantile at position (n - 1) q of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

/// Quartile coefficient of dispersion (Q3 - Q1) / (Q3 + Q1); 0 when the
/// denominator vanishes.
double quartile_dispersion(std::vector<double> values);

/// Quartile dispersion of the pooled interior angles. Requires at least four
/// angles in total.
double angle_dispersion(std::span<const Polyline> polygons);

/// Pooled-edge printability of the whole stack. Throws DegenerateFormError
/// when the total edge length is zero.
double printability(const FormHistory &history, const FitnessParams &params);

/// a (1 - X) + (1 - a) D.
double combine_complexity(double convexity, double dispersion, double a);

/// w_p P + w_c C.
double overall_fitness(double printability, double complexity, const FitnessParams &params);

/// a (1 - X) + (1 - a) D with X, D averaged over organism-layers.
double complexity(const FormHistory &history, const FitnessParams &params);

/// Full report. Layers are scored in parallel; each layer's partial sums are
/// reduced in layer order so the result is bit-identical for any thread count.
FitnessReport evaluate(const FormHistory &history, const FitnessParams &params);

/// Serial evaluation with brute-force nearest-segment search; test oracle
/// for evaluate().
FitnessReport evaluate_reference(const FormHistory &history, const FitnessParams &params);

}  // namespace growform
