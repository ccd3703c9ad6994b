#pragma once

#include <cstdint>
#include <span>

#include "areaperc/geometry.hpp"
#include "areaperc/grcm.hpp"
#include "areaperc/random.hpp"

namespace areaperc {

/// Area of (union of closed radius-r disks) intersected with the window.
///
/// Exact up to rounding: the boundary of the clipped union is a set of free
/// circular arcs plus covered stretches of the window edges, and the area is
/// the line integral (x dy - y dx)/2 over them. Coincident centers count once.
double union_area(std::span<const Point> centers, double r, const Window& window);

double covered_area(const PointConfiguration& config, double r);

/// Area of B_r(p) ∩ window not already covered by the configuration.
/// Requires config.cell_size() >= 2r.
double delta_area_on_birth(const PointConfiguration& config, const Point& p, double r);

/// Area that disappears from the covered region when `id` is removed.
double delta_area_on_death(const PointConfiguration& config, PointId id, double r);

/// Birth-death chain targeting the area-interaction density
/// exp(-beta |B_r(x) ∩ W|) against Poisson(z) on W, with free boundary.
/// Acceptance: birth min(1, z|W|/(n+1) e^{-beta dH}), death
/// min(1, n/(z|W|) e^{beta dH}).
///
/// Slow (one exact area update per proposal); meant for small windows as a
/// cross-check of the gRCM pipeline.
class DirectAreaChain {
 public:
  DirectAreaChain(Window window, const AreaParams& params, std::uint64_t seed, double radius = 1.0);

  bool step();
  void run(std::uint64_t n_steps);

  const PointConfiguration& config() const { return config_; }
  std::uint64_t steps() const { return steps_; }

 private:
  AreaParams params_;
  double radius_;
  double log_mass_;  // log(z |W|), -inf when z == 0
  PointConfiguration config_;
  Rng rng_;
  std::uint64_t steps_ = 0;
  std::vector<PointId> scratch_ids_;
  std::vector<Point> scratch_pts_;
};

PointConfiguration run_direct_chain(const AreaParams& params, const Window& window,
                                    std::uint64_t n_steps, std::uint64_t seed);

}  // namespace areaperc
