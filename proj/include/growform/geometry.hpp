#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace growform {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// A closed polygon stored without repeating the first vertex; the edge
/// from back() to front() is implied.
using Polyline = std::vector<Vec2>;

/// One timestep of a form: every organism outline alive at that step.
using Layer = std::vector<Polyline>;

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Sum of edge lengths including the closing edge.
double perimeter(std::span<const Vec2> ring);

/// Signed shoelace area; positive for counterclockwise rings.
double signed_area(std::span<const Vec2> ring);

}  // namespace growform
