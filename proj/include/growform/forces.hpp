#pragma once

#include <span>
#include <vector>

#include "growform/geometry.hpp"
#include "growform/sim_params.hpp"

namespace growform {

/// Uniform bucket grid over a point set, bucket contents stored contiguously
/// in ascending point index (counting sort), so neighbour visiting order is
/// fixed.
class SpatialHash {
 public:
  SpatialHash(std::span<const Vec2> points, double cell_size);

  template <typename Fn>
  void for_each_near(Vec2 p, Fn &&fn) const {
    const int cx = bucket_x(p.x), cy = bucket_y(p.y);
    for (int by = cy - 1; by <= cy + 1; ++by) {
      if (by < 0 || by >= ny_) continue;
      for (int bx = cx - 1; bx <= cx + 1; ++bx) {
        if (bx < 0 || bx >= nx_) continue;
        const std::size_t b = static_cast<std::size_t>(by) * nx_ + bx;
        for (std::size_t k = start_[b]; k < start_[b + 1]; ++k) fn(order_[k]);
      }
    }
  }

 private:
  int bucket_x(double x) const;
  int bucket_y(double y) const;

  double cell_ = 1.0;
  double min_x_ = 0.0, min_y_ = 0.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> order_;
};

/// Adds the pairwise repulsion acting on every point to `forces`. Each
/// point gathers from its own neighbours, so the OpenMP loop has no write
/// sharing and the result is independent of the thread count.
void accumulate_repulsion(std::span<const Vec2> positions, const SimParams &p, std::span<Vec2> forces);

/// O(n^2) serial version of accumulate_repulsion, kept as a test oracle.
void accumulate_repulsion_reference(std::span<const Vec2> positions, const SimParams &p,
                                    std::span<Vec2> forces);

/// Force on `self` from a cell at `other`, pointing away from `other`.
/// Coincident centres give no force since the direction is undefined.
Vec2 repulsion_between(Vec2 self, Vec2 other, const SimParams &p);

}  // namespace growform
