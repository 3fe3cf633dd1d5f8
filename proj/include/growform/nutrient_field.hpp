#pragma once

#include <vector>

#include "growform/geometry.hpp"
#include "growform/rng.hpp"
#include "growform/sim_params.hpp"

namespace growform {

struct NutrientSource {
  int ix = 0;
  int iy = 0;
  double alpha = 0.1;    ///< emission per timestep
  double beta = 5.0;     ///< total capacity
  double emitted = 0.0;

  bool exhausted() const { return emitted >= beta; }
  friend bool operator==(const NutrientSource &, const NutrientSource &) = default;
};

/// Square grid of nutrient concentrations covering the environment,
/// stored row-major (iy * size + ix).
class NutrientField {
 public:
  NutrientField() = default;
  NutrientField(int size, double env_size, double gamma, double c_n);

  int size() const { return size_; }
  double tile_size() const { return env_size_ / size_; }
  double gamma() const { return gamma_; }
  double decay() const { return c_n_; }

  double &at(int ix, int iy) { return grid_[static_cast<std::size_t>(iy) * size_ + ix]; }
  double at(int ix, int iy) const { return grid_[static_cast<std::size_t>(iy) * size_ + ix]; }
  const std::vector<double> &grid() const { return grid_; }
  std::vector<double> &grid() { return grid_; }

  std::vector<NutrientSource> &sources() { return sources_; }
  const std::vector<NutrientSource> &sources() const { return sources_; }

  double total() const;

  /// Tile containing an environment position (clamped to the grid).
  void tile_of(Vec2 p, int &ix, int &iy) const;

  /// Places `count` fresh sources at seeded uniform-random tiles.
  void seed_sources(int count, const SimParams &params, Rng &rng);

  /// One explicit finite-difference step of dN/dt = gamma^2 lap(N) - c_N with
  /// a 5-point stencil and no-flux boundaries, clamped at zero. Every tile
  /// update reads the pre-step snapshot.
  void diffuse(double dt);

  /// Each source emits min(alpha, beta - emitted) into its tile; exhausted
  /// sources are replaced at a new random tile.
  void emit_and_replace(const SimParams &params, Rng &rng);

  /// Bilinear interpolation of tile-centre samples.
  double sample(Vec2 p) const;
  /// Gradient of the bilinear interpolant at p (per environment unit).
  Vec2 gradient(Vec2 p) const;
  /// True when any tile whose centre lies within `radius` of p holds nutrient.
  bool senses_nutrient(Vec2 p, double radius) const;

  friend bool operator==(const NutrientField &, const NutrientField &) = default;

 private:
  int size_ = 0;
  double env_size_ = 0.0;
  double gamma_ = 0.0;
  double c_n_ = 0.0;
  std::vector<double> grid_;
  std::vector<NutrientSource> sources_;
  std::vector<double> scratch_;

  NutrientSource make_source(const SimParams &params, Rng &rng) const;
};

}  // namespace growform
