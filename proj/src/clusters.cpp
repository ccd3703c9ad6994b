#include "areaperc/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace areaperc {

ClusterWeight::ClusterWeight(double alpha1, double alpha2) : alpha1_(alpha1), alpha2_(alpha2) {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || std::abs(alpha1 + alpha2 - 1.0) > 1e-12) {
    throw std::invalid_argument("cluster weights need alpha1, alpha2 >= 0 with alpha1 + alpha2 = 1");
  }
  const double hi = std::max(alpha1, alpha2);
  const double lo = std::min(alpha1, alpha2);
  log_max_ = std::log(hi);
  has_min_ = lo > 0.0;
  log_ratio_ = has_min_ ? std::log(lo / hi) : 0.0;
}

double ClusterWeight::log_factor(std::size_t k) const {
  const double kd = static_cast<double>(k);
  if (!has_min_) return k == 0 ? std::log(2.0) : kd * log_max_;
  return kd * log_max_ + std::log1p(std::exp(kd * log_ratio_));
}

ClusterPartition::ClusterPartition(const PointConfiguration& config, double connection_dist)
    : connection_dist_(connection_dist) {
  if (!(connection_dist > 0.0)) throw std::invalid_argument("connection distance must be positive");
  if (connection_dist > config.cell_size()) {
    throw std::invalid_argument("connection distance exceeds the configuration's grid cell size");
  }
  grow_to(config.capacity());

  std::vector<PointId> nb;
  for (PointId id : config.ids()) {
    config.neighbors_within(config[id], connection_dist_, nb, id);
    adjacency_[id] = nb;
  }

  // Label components by BFS.
  std::vector<bool> seen(config.capacity(), false);
  std::vector<PointId> queue;
  for (PointId root : config.ids()) {
    if (seen[root]) continue;
    const ClusterId c = new_cluster();
    queue.assign(1, root);
    seen[root] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const PointId v = queue[head];
      attach(v, c);
      for (PointId u : adjacency_[v]) {
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
  }
}

void ClusterPartition::grow_to(std::size_t capacity) {
  if (label_.size() >= capacity) return;
  label_.resize(capacity, 0);
  pos_in_cluster_.resize(capacity, 0);
  adjacency_.resize(capacity);
  stamp_.resize(capacity, 0);
  owner_.resize(capacity, 0);
}

ClusterId ClusterPartition::new_cluster() {
  ++live_clusters_;
  if (!free_clusters_.empty()) {
    const ClusterId c = free_clusters_.back();
    free_clusters_.pop_back();
    return c;
  }
  clusters_.emplace_back();
  return static_cast<ClusterId>(clusters_.size() - 1);
}

void ClusterPartition::release_cluster(ClusterId c) {
  --live_clusters_;
  free_clusters_.push_back(c);
}

void ClusterPartition::attach(PointId id, ClusterId c) {
  label_[id] = c;
  pos_in_cluster_[id] = static_cast<std::uint32_t>(clusters_[c].size());
  clusters_[c].push_back(id);
  ++points_;
}

void ClusterPartition::detach(PointId id) {
  auto& m = clusters_[label_[id]];
  const PointId last = m.back();
  m[pos_in_cluster_[id]] = last;
  pos_in_cluster_[last] = pos_in_cluster_[id];
  m.pop_back();
  --points_;
}

std::vector<std::size_t> ClusterPartition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(live_clusters_);
  for_each_cluster([&](ClusterId, std::size_t s) { out.push_back(s); });
  std::sort(out.begin(), out.end());
  return out;
}

BirthPlan ClusterPartition::plan_birth(const PointConfiguration& config, const Point& p,
                                       const ClusterWeight& weight) const {
  BirthPlan plan;
  plan.point = p;
  config.neighbors_within(p, connection_dist_, plan.neighbors);
  double log_parts = 0.0;
  for (PointId u : plan.neighbors) {
    const ClusterId c = label_[u];
    if (std::find(plan.merged.begin(), plan.merged.end(), c) == plan.merged.end()) {
      plan.merged.push_back(c);
      plan.merged_size += clusters_[c].size();
      log_parts += weight.log_factor(clusters_[c].size());
    }
  }
  plan.log_ratio = weight.log_factor(plan.merged_size) - log_parts;
  return plan;
}

PointId ClusterPartition::commit_birth(PointConfiguration& config, const BirthPlan& plan) {
  const PointId id = config.insert(plan.point);
  grow_to(config.capacity());

  adjacency_[id] = plan.neighbors;
  for (PointId u : plan.neighbors) adjacency_[u].push_back(id);

  if (plan.merged.empty()) {
    attach(id, new_cluster());
    return id;
  }
  ClusterId target = plan.merged.front();
  for (ClusterId c : plan.merged) {
    if (clusters_[c].size() > clusters_[target].size()) target = c;
  }
  for (ClusterId c : plan.merged) {
    if (c == target) continue;
    auto& dst = clusters_[target];
    for (PointId u : clusters_[c]) {
      label_[u] = target;
      pos_in_cluster_[u] = static_cast<std::uint32_t>(dst.size());
      dst.push_back(u);
    }
    clusters_[c].clear();
    release_cluster(c);
  }
  attach(id, target);
  return id;
}

std::uint32_t ClusterPartition::find_search(std::uint32_t s) {
  while (searches_[s].parent != s) {
    searches_[s].parent = searches_[searches_[s].parent].parent;
    s = searches_[s].parent;
  }
  return s;
}

void ClusterPartition::merge_searches(std::uint32_t a, std::uint32_t b) {
  if (searches_[a].members.size() < searches_[b].members.size()) std::swap(a, b);
  Search& big = searches_[a];
  Search& small = searches_[b];
  big.members.insert(big.members.end(), small.members.begin(), small.members.end());
  big.queue.insert(big.queue.end(), small.queue.begin() + static_cast<std::ptrdiff_t>(small.head),
                   small.queue.end());
  small.members.clear();
  small.queue.clear();
  small.head = 0;
  small.parent = a;
}

DeathPlan ClusterPartition::plan_death(const PointConfiguration& config, PointId id,
                                       const ClusterWeight& weight) {
  if (!config.contains(id) || id >= label_.size()) {
    throw std::out_of_range("unknown point id " + std::to_string(id));
  }
  DeathPlan plan;
  plan.id = id;
  plan.cluster = label_[id];
  const std::size_t old_size = clusters_[plan.cluster].size();
  const auto& adj = adjacency_[id];

  if (adj.size() <= 1) {
    plan.remainder_size = old_size - 1;
    plan.log_ratio = (plan.remainder_size > 0 ? weight.log_factor(plan.remainder_size) : 0.0) -
                     weight.log_factor(old_size);
    return plan;
  }

  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  stamp_[id] = epoch_;  // never enter the removed point

  const auto n_search = static_cast<std::uint32_t>(adj.size());
  if (searches_.size() < n_search) searches_.resize(n_search);
  for (std::uint32_t s = 0; s < n_search; ++s) {
    Search& S = searches_[s];
    S.members.assign(1, adj[s]);
    S.queue.assign(1, adj[s]);
    S.head = 0;
    S.parent = s;
    S.done = false;
    stamp_[adj[s]] = epoch_;
    owner_[adj[s]] = s;
  }

  // Expand one vertex per running search per round until a single search is
  // left running; everything it has not reached is connected to it.
  std::uint32_t running = n_search;
  while (running > 1) {
    for (std::uint32_t s = 0; s < n_search && running > 1; ++s) {
      if (searches_[s].parent != s || searches_[s].done) continue;
      if (searches_[s].head == searches_[s].queue.size()) {
        searches_[s].done = true;
        --running;
        continue;
      }
      const PointId v = searches_[s].queue[searches_[s].head++];
      for (PointId u : adjacency_[v]) {
        const std::uint32_t cur = find_search(s);
        if (stamp_[u] != epoch_) {
          stamp_[u] = epoch_;
          owner_[u] = cur;
          searches_[cur].members.push_back(u);
          searches_[cur].queue.push_back(u);
        } else if (u != id) {
          const std::uint32_t other = find_search(owner_[u]);
          if (other != cur) {
            merge_searches(cur, other);
            --running;
          }
        }
      }
    }
  }

  std::size_t split_total = 0;
  double log_new = 0.0;
  for (std::uint32_t s = 0; s < n_search; ++s) {
    Search& S = searches_[s];
    if (S.parent != s || !S.done) continue;
    split_total += S.members.size();
    log_new += weight.log_factor(S.members.size());
    plan.split_off.push_back(S.members);
  }
  plan.remainder_size = old_size - 1 - split_total;
  log_new += weight.log_factor(plan.remainder_size);
  plan.log_ratio = log_new - weight.log_factor(old_size);
  return plan;
}

Point ClusterPartition::commit_death(PointConfiguration& config, const DeathPlan& plan) {
  const PointId id = plan.id;
  for (PointId u : adjacency_[id]) {
    auto& a = adjacency_[u];
    const auto it = std::find(a.begin(), a.end(), id);
    *it = a.back();
    a.pop_back();
  }
  adjacency_[id].clear();

  const ClusterId old = label_[id];
  detach(id);
  for (const auto& piece : plan.split_off) {
    const ClusterId c = new_cluster();
    for (PointId u : piece) {
      detach(u);
      attach(u, c);
    }
  }
  if (clusters_[old].empty()) release_cluster(old);
  return config.remove(id);
}

ClusterPartition build_partition(const PointConfiguration& config, double connection_dist) {
  return ClusterPartition(config, connection_dist);
}

double log_cluster_weight(const ClusterPartition& partition, double alpha1, double alpha2) {
  const ClusterWeight w(alpha1, alpha2);
  double total = 0.0;
  partition.for_each_cluster([&](ClusterId, std::size_t s) { total += w.log_factor(s); });
  return total;
}

double birth_log_weight_ratio(const ClusterPartition& partition, const PointConfiguration& config,
                              const Point& p, double alpha1, double alpha2) {
  return partition.plan_birth(config, p, ClusterWeight(alpha1, alpha2)).log_ratio;
}

PointId commit_birth(ClusterPartition& partition, PointConfiguration& config, const Point& p) {
  return partition.commit_birth(config, partition.plan_birth(config, p, ClusterWeight(1.0, 0.0)));
}

DeathPlan death_log_weight_ratio_and_plan(ClusterPartition& partition,
                                          const PointConfiguration& config, PointId id,
                                          double alpha1, double alpha2) {
  return partition.plan_death(config, id, ClusterWeight(alpha1, alpha2));
}

}  // namespace areaperc
