#include "growform/nutrient_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace growform {

NutrientField::NutrientField(int size, double env_size, double gamma, double c_n)
    : size_(size), env_size_(env_size), gamma_(gamma), c_n_(c_n),
      grid_(static_cast<std::size_t>(size) * size, 0.0) {}

double NutrientField::total() const { return std::accumulate(grid_.begin(), grid_.end(), 0.0); }

void NutrientField::tile_of(Vec2 p, int &ix, int &iy) const {
  const double t = tile_size();
  ix = std::clamp(static_cast<int>(std::floor(p.x / t)), 0, size_ - 1);
  iy = std::clamp(static_cast<int>(std::floor(p.y / t)), 0, size_ - 1);
}

NutrientSource NutrientField::make_source(const SimParams &params, Rng &rng) const {
  NutrientSource s;
  s.ix = static_cast<int>(rng.below(static_cast<std::uint64_t>(size_)));
  s.iy = static_cast<int>(rng.below(static_cast<std::uint64_t>(size_)));
  s.alpha = params.source_alpha;
  s.beta = rng.uniform(params.source_beta_min, params.source_beta_max);
  if (params.source_beta_max == params.source_beta_min) s.beta = params.source_beta_min;
  return s;
}

void NutrientField::seed_sources(int count, const SimParams &params, Rng &rng) {
  sources_.clear();
  for (int i = 0; i < count; ++i) sources_.push_back(make_source(params, rng));
}

void NutrientField::diffuse(double dt) {
  const int n = size_;
  scratch_ = grid_;
  const double rate = dt * gamma_ * gamma_;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double c = scratch_[static_cast<std::size_t>(iy) * n + ix];
      // Missing neighbours mirror the centre value (zero flux across the wall).
      const double l = ix > 0 ? scratch_[static_cast<std::size_t>(iy) * n + ix - 1] : c;
      const double r = ix < n - 1 ? scratch_[static_cast<std::size_t>(iy) * n + ix + 1] : c;
      const double d = iy > 0 ? scratch_[static_cast<std::size_t>(iy - 1) * n + ix] : c;
      const double u = iy < n - 1 ? scratch_[static_cast<std::size_t>(iy + 1) * n + ix] : c;
      const double lap = l + r + d + u - 4.0 * c;
      grid_[static_cast<std::size_t>(iy) * n + ix] = std::max(0.0, c + rate * lap - dt * c_n_);
    }
  }
}

void NutrientField::emit_and_replace(const SimParams &params, Rng &rng) {
  for (auto &s : sources_) {
    const double amount = std::min(s.alpha, s.beta - s.emitted);
    if (amount > 0.0) {
      at(s.ix, s.iy) += amount;
      s.emitted += amount;
    }
    if (s.exhausted()) s = make_source(params, rng);
  }
}

namespace {

struct BilinearCell {
  int x0, y0, x1, y1;
  double fx, fy;
  bool clamp_x, clamp_y;
};

BilinearCell locate(double px, double py, double tile, int n) {
  // Sample i sits at the tile centre (i + 0.5) * tile.
  auto axis = [&](double p, int &i0, int &i1, double &f, bool &clamped) {
    const double u = p / tile - 0.5;
    clamped = false;
    if (u <= 0.0) {
      i0 = i1 = 0;
      f = 0.0;
      clamped = true;
    } else if (u >= n - 1) {
      i0 = i1 = n - 1;
      f = 0.0;
      clamped = true;
    } else {
      i0 = static_cast<int>(std::floor(u));
      i1 = i0 + 1;
      f = u - i0;
    }
  };
  BilinearCell c{};
  axis(px, c.x0, c.x1, c.fx, c.clamp_x);
  axis(py, c.y0, c.y1, c.fy, c.clamp_y);
  return c;
}

}  // namespace

double NutrientField::sample(Vec2 p) const {
  const auto c = locate(p.x, p.y, tile_size(), size_);
  const double v00 = at(c.x0, c.y0), v10 = at(c.x1, c.y0), v01 = at(c.x0, c.y1), v11 = at(c.x1, c.y1);
  return (1 - c.fx) * (1 - c.fy) * v00 + c.fx * (1 - c.fy) * v10 + (1 - c.fx) * c.fy * v01 + c.fx * c.fy * v11;
}

Vec2 NutrientField::gradient(Vec2 p) const {
  const double t = tile_size();
  const auto c = locate(p.x, p.y, t, size_);
  const double v00 = at(c.x0, c.y0), v10 = at(c.x1, c.y0), v01 = at(c.x0, c.y1), v11 = at(c.x1, c.y1);
  Vec2 g;
  g.x = c.clamp_x ? 0.0 : ((1 - c.fy) * (v10 - v00) + c.fy * (v11 - v01)) / t;
  g.y = c.clamp_y ? 0.0 : ((1 - c.fx) * (v01 - v00) + c.fx * (v11 - v10)) / t;
  return g;
}

bool NutrientField::senses_nutrient(Vec2 p, double radius) const {
  const double t = tile_size();
  const int lo_x = std::max(0, static_cast<int>(std::floor((p.x - radius) / t)));
  const int hi_x = std::min(size_ - 1, static_cast<int>(std::floor((p.x + radius) / t)));
  const int lo_y = std::max(0, static_cast<int>(std::floor((p.y - radius) / t)));
  const int hi_y = std::min(size_ - 1, static_cast<int>(std::floor((p.y + radius) / t)));
  const double r2 = radius * radius;
  for (int iy = lo_y; iy <= hi_y; ++iy)
    for (int ix = lo_x; ix <= hi_x; ++ix) {
      const Vec2 centre{(ix + 0.5) * t, (iy + 0.5) * t};
      const Vec2 d = centre - p;
      if (dot(d, d) <= r2 && at(ix, iy) > 0.0) return true;
    }
  return false;
}

}  // namespace growform
