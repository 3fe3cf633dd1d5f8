#include "growform/forces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "growform/organism.hpp"

namespace growform {

SpatialHash::SpatialHash(std::span<const Vec2> points, double cell_size) : cell_(cell_size) {
  if (points.empty()) {
    start_.assign(2, 0);
    return;
  }
  double max_x = -std::numeric_limits<double>::infinity(), max_y = max_x;
  min_x_ = std::numeric_limits<double>::infinity();
  min_y_ = min_x_;
  for (const auto &q : points) {
    min_x_ = std::min(min_x_, q.x);
    min_y_ = std::min(min_y_, q.y);
    max_x = std::max(max_x, q.x);
    max_y = std::max(max_y, q.y);
  }
  nx_ = static_cast<int>(std::floor((max_x - min_x_) / cell_)) + 1;
  ny_ = static_cast<int>(std::floor((max_y - min_y_) / cell_)) + 1;

  const std::size_t buckets = static_cast<std::size_t>(nx_) * ny_;
  std::vector<std::size_t> bucket_of(points.size());
  start_.assign(buckets + 1, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    bucket_of[i] = static_cast<std::size_t>(bucket_y(points[i].y)) * nx_ + bucket_x(points[i].x);
    ++start_[bucket_of[i] + 1];
  }
  for (std::size_t b = 0; b < buckets; ++b) start_[b + 1] += start_[b];
  order_.resize(points.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) order_[fill[bucket_of[i]]++] = i;
}

int SpatialHash::bucket_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - min_x_) / cell_)), 0, nx_ - 1);
}

int SpatialHash::bucket_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - min_y_) / cell_)), 0, ny_ - 1);
}

Vec2 repulsion_between(Vec2 self, Vec2 other, const SimParams &p) {
  const Vec2 away = self - other;
  const double d = norm(away);
  if (d == 0.0 || d > p.r_r) return {};
  const double magnitude = -repulsion_force(d, p);
  return away * (magnitude / d);
}

void accumulate_repulsion(std::span<const Vec2> positions, const SimParams &p, std::span<Vec2> forces) {
  const SpatialHash hash(positions, p.r_r);
  const auto n = static_cast<std::ptrdiff_t>(positions.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Vec2 sum;
    const Vec2 self = positions[static_cast<std::size_t>(i)];
    hash.for_each_near(self, [&](std::size_t j) {
      if (j != static_cast<std::size_t>(i)) sum += repulsion_between(self, positions[j], p);
    });
    forces[static_cast<std::size_t>(i)] += sum;
  }
}

void accumulate_repulsion_reference(std::span<const Vec2> positions, const SimParams &p,
                                    std::span<Vec2> forces) {
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = 0; j < positions.size(); ++j)
      if (i != j) forces[i] += repulsion_between(positions[i], positions[j], p);
}

}  // namespace growform
