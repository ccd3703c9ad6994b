#include "areaperc/percolation.hpp"

#include <stdexcept>

#include "areaperc/clusters.hpp"

namespace areaperc {
namespace {

// The caller's grid may be too fine for 2r queries; re-index when needed.
PointConfiguration indexed_for(const PointConfiguration& config, double dist) {
  PointConfiguration out(config.window(), dist);
  for (PointId id : config.ids()) out.insert(config[id]);
  return out;
}

}  // namespace

bool center_to_boundary(const PointConfiguration& config, const PercolationQuery& q) {
  if (!(q.radius > 0.0)) throw std::invalid_argument("percolation radius must be positive");
  if (config.empty()) return false;
  const double reach = 2.0 * q.radius;
  if (config.cell_size() < reach) return center_to_boundary(indexed_for(config, reach), q);

  const Window& w = config.window();
  std::vector<bool> seen(config.capacity(), false);
  std::vector<PointId> queue = config.neighbors_within(w.center(), q.radius);
  for (PointId id : queue) seen[id] = true;

  std::vector<PointId> nb;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const PointId v = queue[head];
    if (w.distance_to_boundary(config[v]) <= q.radius) return true;
    config.neighbors_within(config[v], reach, nb, v);
    for (PointId u : nb) {
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return false;
}

std::vector<std::size_t> component_sizes(const PointConfiguration& config,
                                         double connection_dist) {
  if (config.cell_size() < connection_dist) {
    return component_sizes(indexed_for(config, connection_dist), connection_dist);
  }
  return build_partition(config, connection_dist).sizes();
}

}  // namespace areaperc
