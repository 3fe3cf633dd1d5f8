#include "growform/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace growform {

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateHullError("convex hull needs three distinct points");

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  // Strict left turns only, so collinear points are dropped.
  for (const auto &p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateHullError("all points are collinear");
  return hull;
}

double hull_width(std::span<const Vec2> hull) {
  const std::size_t n = hull.size();
  if (n < 3) return 0.0;
  // For each edge, advance the antipodal vertex while the distance from the
  // edge's supporting line keeps growing.
  double best = std::numeric_limits<double>::infinity();
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = hull[i];
    const Vec2 b = hull[(i + 1) % n];
    const Vec2 e = b - a;
    const double len = norm(e);
    if (len == 0.0) continue;
    auto height = [&](std::size_t idx) { return cross(e, hull[idx % n] - a); };
    if (i == 0) j = 1;
    while (height(j + 1) > height(j)) j = (j + 1) % n;
    best = std::min(best, height(j) / len);
  }
  return std::isfinite(best) ? best : 0.0;
}

double min_diameter(std::span<const Vec2> polygon) {
  try {
    const auto hull = convex_hull(polygon);
    return hull_width(hull);
  } catch (const DegenerateHullError &) {
    return 0.0;
  }
}

}  // namespace growform
