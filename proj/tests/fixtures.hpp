#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "growform/form_history.hpp"
#include "oracles.hpp"

namespace fixtures {

using growform::FormHistory;
using growform::Layer;
using growform::Polyline;
using growform::Vec2;

/// Regular n-gon, counterclockwise.
inline Polyline circle(Vec2 c, double r, int n) {
  Polyline p;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    p.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return p;
}

inline FormHistory stacked_circles(int layers, double r = 100.0, int n = 62) {
  FormHistory h;
  for (int i = 0; i < layers; ++i) h.layers.push_back({circle({300, 300}, r, n)});
  return h;
}

/// G-code golden fixtures.
inline FormHistory square_layer() {
  // 10 mm square centred on the plate.
  FormHistory h;
  h.units_to_mm = 0.5;
  h.layers.push_back({{{290, 290}, {310, 290}, {310, 310}, {290, 310}}});
  return h;
}

inline FormHistory two_organisms() {
  FormHistory h;
  for (int i = 0; i < 3; ++i)
    h.layers.push_back({circle({250.0 + i, 300}, 30, 8), circle({380, 300.0 - i}, 12, 5)});
  return h;
}

/// A wandering stack of one or two star-shaped organisms per layer.
inline FormHistory random_history(std::mt19937_64 &rng, int layers, double drift) {
  std::uniform_real_distribution<double> u(-drift, drift);
  std::uniform_int_distribution<int> verts(4, 24), two(0, 3);
  FormHistory h;
  Vec2 c{300, 300};
  for (int i = 0; i < layers; ++i) {
    c = {c.x + u(rng), c.y + u(rng)};
    Layer layer;
    layer.push_back(oracle::star_polygon(rng, verts(rng), 20.0, 60.0, two(rng) != 0));
    for (auto &v : layer.back()) v = {v.x + c.x, v.y + c.y};
    if (two(rng) == 0) {
      layer.push_back(oracle::star_polygon(rng, verts(rng), 3.0, 12.0, true));
      for (auto &v : layer.back()) v = {v.x + c.x + 150.0, v.y + c.y};
    }
    h.layers.push_back(std::move(layer));
  }
  return h;
}

}  // namespace fixtures
