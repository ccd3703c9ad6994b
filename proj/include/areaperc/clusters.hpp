#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "areaperc/geometry.hpp"

namespace areaperc {

/// log(alpha1^k + alpha2^k) for a cluster of k points, evaluated as
/// k*log(a_max) + log1p((a_min/a_max)^k) so that large k never underflows.
class ClusterWeight {
 public:
  /// Throws std::invalid_argument unless alpha1, alpha2 >= 0 and
  /// |alpha1 + alpha2 - 1| <= 1e-12.
  ClusterWeight(double alpha1, double alpha2);

  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }

  double log_factor(std::size_t k) const;

  /// True when one alpha is zero: every nonempty cluster then has weight 1.
  bool trivial() const { return !has_min_; }

 private:
  double alpha1_;
  double alpha2_;
  double log_max_;
  double log_ratio_;
  bool has_min_;
};

using ClusterId = std::uint32_t;

struct BirthPlan {
  Point point;
  std::vector<PointId> neighbors;
  /// Distinct clusters adjacent to the new point.
  std::vector<ClusterId> merged;
  std::size_t merged_size = 1;
  double log_ratio = 0.0;
};

struct DeathPlan {
  PointId id = PointConfiguration::kNoPoint;
  ClusterId cluster = 0;
  /// Components that separate from the cluster once `id` is gone. The
  /// largest-explored remaining piece keeps the old cluster id and is not
  /// listed.
  std::vector<std::vector<PointId>> split_off;
  std::size_t remainder_size = 0;
  double log_ratio = 0.0;
};

/// Connected components of a configuration under "distance <= connection_dist".
///
/// The partition mirrors one PointConfiguration: it must be built from it and
/// then only mutated together with it through commit_birth / commit_death.
/// Births merge the adjacent clusters into the largest one; deaths run
/// breadth-first searches from each former neighbour in lockstep and stop as
/// soon as a single search is still running, so the cost of a death scales
/// with the pieces that split off rather than with the cluster.
class ClusterPartition {
 public:
  ClusterPartition(const PointConfiguration& config, double connection_dist);

  double connection_dist() const { return connection_dist_; }
  std::size_t point_count() const { return points_; }
  std::size_t cluster_count() const { return live_clusters_; }

  ClusterId cluster_of(PointId id) const { return label_[id]; }
  std::size_t cluster_size(ClusterId c) const { return clusters_[c].size(); }
  std::span<const PointId> members(ClusterId c) const { return clusters_[c]; }
  std::span<const PointId> adjacent(PointId id) const { return adjacency_[id]; }

  /// Calls f(cluster id, size) for every nonempty cluster.
  template <class F>
  void for_each_cluster(F&& f) const {
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      if (!clusters_[c].empty()) f(static_cast<ClusterId>(c), clusters_[c].size());
    }
  }

  /// Cluster sizes in ascending order.
  std::vector<std::size_t> sizes() const;

  BirthPlan plan_birth(const PointConfiguration& config, const Point& p,
                       const ClusterWeight& weight) const;
  PointId commit_birth(PointConfiguration& config, const BirthPlan& plan);

  /// Throws std::out_of_range for an id that is not in the configuration.
  DeathPlan plan_death(const PointConfiguration& config, PointId id, const ClusterWeight& weight);
  Point commit_death(PointConfiguration& config, const DeathPlan& plan);

 private:
  struct Search {
    std::vector<PointId> members;
    std::vector<PointId> queue;
    std::size_t head = 0;
    std::uint32_t parent = 0;
    bool done = false;
  };

  void grow_to(std::size_t capacity);
  ClusterId new_cluster();
  void release_cluster(ClusterId c);
  void detach(PointId id);
  void attach(PointId id, ClusterId c);
  std::uint32_t find_search(std::uint32_t s);
  void merge_searches(std::uint32_t a, std::uint32_t b);

  double connection_dist_;
  std::size_t points_ = 0;
  std::size_t live_clusters_ = 0;
  std::vector<ClusterId> label_;
  std::vector<std::uint32_t> pos_in_cluster_;
  std::vector<std::vector<PointId>> adjacency_;
  std::vector<std::vector<PointId>> clusters_;
  std::vector<ClusterId> free_clusters_;

  // Scratch for plan_death.
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> owner_;
  std::uint32_t epoch_ = 0;
  std::vector<Search> searches_;
};

ClusterPartition build_partition(const PointConfiguration& config, double connection_dist);

/// Sum over clusters of log(alpha1^#C + alpha2^#C).
double log_cluster_weight(const ClusterPartition& partition, double alpha1, double alpha2);

/// log w(config + p) - log w(config), without mutating anything.
double birth_log_weight_ratio(const ClusterPartition& partition, const PointConfiguration& config,
                              const Point& p, double alpha1, double alpha2);

/// Inserts p into the configuration and merges the clusters it touches.
PointId commit_birth(ClusterPartition& partition, PointConfiguration& config, const Point& p);

/// log w(config - id) - log w(config) and the plan that commit_death applies.
DeathPlan death_log_weight_ratio_and_plan(ClusterPartition& partition,
                                          const PointConfiguration& config, PointId id,
                                          double alpha1, double alpha2);

}  // namespace areaperc
