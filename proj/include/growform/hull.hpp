#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "growform/geometry.hpp"

namespace growform {

class DegenerateHullError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counterclockwise convex hull (Andrew's monotone chain) without duplicate
/// or collinear vertices. Throws DegenerateHullError when fewer than three
/// non-collinear points exist.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Minimum width of the convex hull of a polygon: the smallest distance
/// between two parallel supporting lines, by rotating calipers. Returns 0
/// for degenerate input.
double min_diameter(std::span<const Vec2> polygon);

/// Width of an already-convex CCW polygon by rotating calipers.
double hull_width(std::span<const Vec2> hull);

}  // namespace growform
