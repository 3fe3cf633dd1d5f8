#include "growform/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "growform/hull.hpp"
#include "growform/json_fields.hpp"

namespace growform {

void validate(const FitnessParams &p, const std::string &path) {
  if (!(p.min_diameter_threshold > 0.0)) throw ConfigError(path + ".min_diameter_threshold", "must be > 0");
  if (!(p.layer_height_mm > 0.0)) throw ConfigError(path + ".layer_height_mm", "must be > 0");
  auto unit = [&](double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(path + "." + name, "must lie in [0, 1]");
  };
  unit(p.convexity_weight, "convexity_weight");
  unit(p.w_p, "w_p");
  unit(p.w_c, "w_c");
  if (std::abs(p.w_p + p.w_c - 1.0) > 1e-9) throw ConfigError(path + ".w_c", "w_p + w_c must equal 1");
}

nlohmann::json to_json(const FitnessParams &p) {
  return {{"min_diameter_threshold", p.min_diameter_threshold},
          {"layer_height_mm", p.layer_height_mm},
          {"convexity_weight", p.convexity_weight},
          {"w_p", p.w_p},
          {"w_c", p.w_c}};
}

FitnessParams fitness_params_from_json(const nlohmann::json &j, const std::string &path) {
  FitnessParams p;
  detail::FieldReader r(j, path);
  r.optional("min_diameter_threshold", p.min_diameter_threshold);
  r.optional("layer_height_mm", p.layer_height_mm);
  r.optional("convexity_weight", p.convexity_weight);
  r.optional("w_p", p.w_p);
  r.optional("w_c", p.w_c);
  r.finish();
  validate(p, path);
  return p;
}

nlohmann::json to_json(const FitnessReport &r) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto &l : r.per_layer)
    layers.push_back({{"layer", l.layer},
                      {"printability", l.printability},
                      {"convexity", l.convexity},
                      {"dispersion", l.dispersion},
                      {"min_diameter_factor", l.min_diameter_factor}});
  return {{"printability", r.printability}, {"complexity", r.complexity}, {"convexity", r.convexity},
          {"dispersion", r.dispersion},     {"fitness", r.fitness},       {"degenerate", r.degenerate},
          {"diagnostic", r.diagnostic},     {"per_layer", std::move(layers)}};
}

FitnessReport fitness_report_from_json(const nlohmann::json &j) {
  FitnessReport r;
  detail::FieldReader reader(j, "report");
  reader.required("printability", r.printability);
  reader.required("complexity", r.complexity);
  reader.required("convexity", r.convexity);
  reader.required("dispersion", r.dispersion);
  reader.required("fitness", r.fitness);
  reader.required("degenerate", r.degenerate);
  reader.optional("diagnostic", r.diagnostic);
  if (const auto *layers = reader.child("per_layer")) {
    for (std::size_t i = 0; i < layers->size(); ++i) {
      LayerScore l;
      detail::FieldReader lr((*layers)[i], "report.per_layer[" + std::to_string(i) + "]");
      lr.required("layer", l.layer);
      lr.required("printability", l.printability);
      lr.required("convexity", l.convexity);
      lr.required("dispersion", l.dispersion);
      lr.required("min_diameter_factor", l.min_diameter_factor);
      lr.finish();
      r.per_layer.push_back(l);
    }
  }
  reader.finish();
  return r;
}

double diameter_factor(double d_min, double threshold) { return d_min >= threshold ? 1.0 : d_min / threshold; }

double support_from_distance(double d, double h) {
  if (d <= h) return 1.0;
  if (d <= 2.0 * h) return 2.0 - d / h;
  return 0.0;
}

double support_score(Vec2 p, const Layer &below, double h) {
  if (below.empty()) return 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto &poly : below) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return support_from_distance(best, h);
}

double edge_support_ratio(double s_start, double s_mid, double s_end, double df) {
  return df * ((s_start + 2.0 * s_mid + s_end) / 4.0);
}

double weighted_printability(std::span<const double> ratios, std::span<const double> lengths) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    num += ratios[i] * lengths[i];
    den += lengths[i];
  }
  if (!(den > 0.0)) throw DegenerateFormError("zero total edge length");
  return num / den;
}

double convexity(std::span<const Vec2> polygon) {
  const double len = perimeter(polygon);
  if (!(len > 0.0)) throw DegenerateFormError("polygon has zero perimeter");
  std::vector<Vec2> hull;
  try {
    hull = convex_hull(polygon);
  } catch (const DegenerateHullError &e) {
    throw DegenerateFormError(e.what());
  }
  return std::min(1.0, perimeter(hull) / len);
}

std::vector<double> interior_angles(std::span<const Polyline> polygons) {
  std::vector<double> angles;
  for (const auto &poly : polygons) {
    const std::size_t n = poly.size();
    if (n < 3) continue;
    const bool ccw = signed_area(poly) >= 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 v = poly[i];
      const Vec2 a = poly[(i + n - 1) % n] - v;
      const Vec2 b = poly[(i + 1) % n] - v;
      if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0)) continue;
      double rad = ccw ? std::atan2(cross(b, a), dot(b, a)) : std::atan2(cross(a, b), dot(a, b));
      double deg = rad * (180.0 / std::numbers::pi);
      if (deg < 0.0) deg += 360.0;
      if (deg >= 360.0) deg -= 360.0;
      angles.push_back(deg);
    }
  }
  return angles;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double quartile_dispersion(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double q1 = quantile_sorted(values, 0.25);
  const double q3 = quantile_sorted(values, 0.75);
  const double den = q3 + q1;
  return den == 0.0 ? 0.0 : (q3 - q1) / den;
}

double angle_dispersion(std::span<const Polyline> polygons) {
  auto angles = interior_angles(polygons);
  if (angles.size() < 4) throw std::invalid_argument("angle dispersion needs at least four angles");
  return quartile_dispersion(std::move(angles));
}

namespace {

/// Buckets the segments of one layer so that every segment within `reach`
/// of a query point is found in the 3x3 block around it.
class SegmentGrid {
 public:
  SegmentGrid(const Layer &layer, double reach) {
    for (const auto &poly : layer) {
      const std::size_t n = poly.size();
      for (std::size_t i = 0; i < n; ++i) segs_.push_back({poly[i], poly[(i + 1) % n]});
    }
    if (segs_.empty()) return;
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    for (const auto &s : segs_) {
      lo_x = std::min({lo_x, s.a.x, s.b.x});
      lo_y = std::min({lo_y, s.a.y, s.b.y});
      hi_x = std::max({hi_x, s.a.x, s.b.x});
      hi_y = std::max({hi_y, s.a.y, s.b.y});
    }
    const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
    cell_ = std::max(reach, extent / 256.0);
    if (!(cell_ > 0.0)) cell_ = 1.0;
    ox_ = lo_x;
    oy_ = lo_y;
    nx_ = static_cast<int>(std::floor((hi_x - lo_x) / cell_)) + 1;
    ny_ = static_cast<int>(std::floor((hi_y - lo_y) / cell_)) + 1;
    start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<std::size_t> fill;
      if (pass == 1) {
        for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
        fill.assign(start_.begin(), start_.end() - 1);
        items_.resize(start_.back());
      }
      for (std::size_t s = 0; s < segs_.size(); ++s) {
        const int x0 = cx(std::min(segs_[s].a.x, segs_[s].b.x)), x1 = cx(std::max(segs_[s].a.x, segs_[s].b.x));
        const int y0 = cy(std::min(segs_[s].a.y, segs_[s].b.y)), y1 = cy(std::max(segs_[s].a.y, segs_[s].b.y));
        for (int y = y0; y <= y1; ++y)
          for (int x = x0; x <= x1; ++x) {
            const std::size_t b = static_cast<std::size_t>(y) * nx_ + x;
            if (pass == 0)
              ++start_[b + 1];
            else
              items_[fill[b]++] = s;
          }
      }
    }
  }

  bool empty() const { return segs_.empty(); }

  /// Nearest distance among segments near p; +inf when none lies in range.
  double nearest(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    const int qx = static_cast<int>(std::floor((p.x - ox_) / cell_));
    const int qy = static_cast<int>(std::floor((p.y - oy_) / cell_));
    for (int y = std::max(qy - 1, 0); y <= std::min(qy + 1, ny_ - 1); ++y)
      for (int x = std::max(qx - 1, 0); x <= std::min(qx + 1, nx_ - 1); ++x) {
        const std::size_t b = static_cast<std::size_t>(y) * nx_ + x;
        for (std::size_t k = start_[b]; k < start_[b + 1]; ++k) {
          const auto &s = segs_[items_[k]];
          best = std::min(best, point_segment_distance(p, s.a, s.b));
        }
      }
    return best;
  }

 private:
  struct Seg {
    Vec2 a, b;
  };
  int cx(double x) const { return std::clamp(static_cast<int>(std::floor((x - ox_) / cell_)), 0, nx_ - 1); }
  int cy(double y) const { return std::clamp(static_cast<int>(std::floor((y - oy_) / cell_)), 0, ny_ - 1); }

  std::vector<Seg> segs_;
  double cell_ = 1.0, ox_ = 0.0, oy_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

struct LayerAccum {
  double weighted = 0.0;
  double length = 0.0;
  double convexity_sum = 0.0;
  double dispersion_sum = 0.0;
  std::size_t organisms = 0;
  double min_df = 1.0;
};

struct OrganismShape {
  double df = 0.0;
  double convexity = 1.0;
  double dispersion = 0.0;
};

OrganismShape organism_shape(const Polyline &poly, double threshold) {
  OrganismShape s;
  try {
    const auto hull = convex_hull(poly);
    s.df = diameter_factor(hull_width(hull), threshold);
    const double len = perimeter(poly);
    s.convexity = len > 0.0 ? std::min(1.0, perimeter(hull) / len) : 1.0;
  } catch (const DegenerateHullError &) {
    s.df = 0.0;
    s.convexity = 1.0;
  }
  const std::span<const Polyline> one(&poly, 1);
  auto angles = interior_angles(one);
  s.dispersion = angles.size() >= 4 ? quartile_dispersion(std::move(angles)) : 0.0;
  return s;
}

template <typename Nearest>
LayerAccum score_layer(const Layer &layer, bool first, double h, double threshold, Nearest &&nearest) {
  LayerAccum acc;
  for (const auto &poly : layer) {
    const OrganismShape shape = organism_shape(poly, threshold);
    acc.convexity_sum += shape.convexity;
    acc.dispersion_sum += shape.dispersion;
    acc.min_df = std::min(acc.min_df, shape.df);
    ++acc.organisms;
    const std::size_t n = poly.size();
    auto support = [&](Vec2 p) { return first ? 1.0 : support_from_distance(nearest(p), h); };
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = poly[i], b = poly[(i + 1) % n];
      const double len = distance(a, b);
      if (len == 0.0) continue;
      const double ratio = edge_support_ratio(support(a), support((a + b) * 0.5), support(b), shape.df);
      acc.weighted += ratio * len;
      acc.length += len;
    }
  }
  return acc;
}

FitnessReport assemble(const std::vector<LayerAccum> &layers, const FitnessParams &params) {
  FitnessReport r;
  double weighted = 0.0, length = 0.0, xs = 0.0, ds = 0.0;
  std::size_t organisms = 0;
  r.per_layer.reserve(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto &l = layers[i];
    weighted += l.weighted;
    length += l.length;
    xs += l.convexity_sum;
    ds += l.dispersion_sum;
    organisms += l.organisms;
    LayerScore s;
    s.layer = i;
    s.printability = l.length > 0.0 ? l.weighted / l.length : 0.0;
    s.convexity = l.organisms ? l.convexity_sum / l.organisms : 1.0;
    s.dispersion = l.organisms ? l.dispersion_sum / l.organisms : 0.0;
    s.min_diameter_factor = l.min_df;
    r.per_layer.push_back(s);
  }
  if (!(length > 0.0) || organisms == 0) {
    r.degenerate = true;
    r.diagnostic = layers.empty() ? "form has no layers" : "zero total edge length";
    r.printability = 0.0;
    r.complexity = 0.0;
    r.fitness = 0.0;
    return r;
  }
  r.printability = std::clamp(weighted / length, 0.0, 1.0);
  r.convexity = xs / static_cast<double>(organisms);
  r.dispersion = ds / static_cast<double>(organisms);
  r.complexity = combine_complexity(r.convexity, r.dispersion, params.convexity_weight);
  r.fitness = overall_fitness(r.printability, r.complexity, params);
  return r;
}

}  // namespace

FitnessReport evaluate(const FormHistory &history, const FitnessParams &params) {
  const double h = params.layer_height_mm / history.units_to_mm;
  const double T = params.min_diameter_threshold;
  const auto n = static_cast<std::ptrdiff_t>(history.layers.size());
  std::vector<LayerAccum> layers(history.layers.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (idx == 0) {
      layers[idx] = score_layer(history.layers[idx], true, h, T, [](Vec2) { return 0.0; });
      continue;
    }
    const SegmentGrid grid(history.layers[idx - 1], 2.0 * h);
    const bool plate = grid.empty();
    layers[idx] = score_layer(history.layers[idx], plate, h, T, [&](Vec2 p) { return grid.nearest(p); });
  }
  return assemble(layers, params);
}

FitnessReport evaluate_reference(const FormHistory &history, const FitnessParams &params) {
  const double h = params.layer_height_mm / history.units_to_mm;
  const double T = params.min_diameter_threshold;
  std::vector<LayerAccum> layers;
  for (std::size_t i = 0; i < history.layers.size(); ++i) {
    const Layer *below = i == 0 ? nullptr : &history.layers[i - 1];
    const bool plate = below == nullptr || below->empty();
    layers.push_back(score_layer(history.layers[i], plate, h, T, [&](Vec2 p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &poly : *below)
        for (std::size_t k = 0; k < poly.size(); ++k)
          best = std::min(best, point_segment_distance(p, poly[k], poly[(k + 1) % poly.size()]));
      return best;
    }));
  }
  return assemble(layers, params);
}

double printability(const FormHistory &history, const FitnessParams &params) {
  const FitnessReport r = evaluate(history, params);
  if (r.degenerate) throw DegenerateFormError(r.diagnostic);
  return r.printability;
}

double combine_complexity(double convexity, double dispersion, double a) {
  return a * (1.0 - convexity) + (1.0 - a) * dispersion;
}

double overall_fitness(double printability, double complexity, const FitnessParams &params) {
  return params.w_p * printability + params.w_c * complexity;
}

double complexity(const FormHistory &history, const FitnessParams &params) {
  return evaluate(history, params).complexity;
}

}  // namespace growform
