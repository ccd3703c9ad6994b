#pragma once

#include <cstddef>
#include <vector>

#include "areaperc/geometry.hpp"

namespace areaperc {

struct PercolationQuery {
  double radius = 1.0;
};

/// True iff one connected component of B_r(config) covers the window center
/// and touches the window boundary (closed balls, closed inequalities):
/// some member x has |x - center| <= r, some member y has
/// min(y.x, y.y, L - y.x, L - y.y) <= r, and consecutive members are at
/// most 2r apart.
bool center_to_boundary(const PointConfiguration& config, const PercolationQuery& q = {});

/// Ascending component sizes of B_{d/2}(config), i.e. clusters at
/// connection distance d.
std::vector<std::size_t> component_sizes(const PointConfiguration& config, double connection_dist);

}  // namespace areaperc
