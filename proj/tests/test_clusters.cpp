#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "areaperc/clusters.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace areaperc;

namespace {

// Same-cluster relation and size multiset against the BFS oracle.
void check_against_bfs(const ClusterPartition& part, const PointConfiguration& c) {
  const auto ref = oracle::components(c, part.connection_dist());
  REQUIRE(part.point_count() == c.size());
  CHECK(part.sizes() == oracle::component_sizes(c, part.connection_dist()));
  std::map<PointId, ClusterId> root_to_cluster;
  for (const auto& [id, root] : ref) {
    const auto [it, fresh] = root_to_cluster.emplace(root, part.cluster_of(id));
    CHECK(it->second == part.cluster_of(id));
  }
  std::set<ClusterId> distinct;
  for (const auto& [root, cl] : root_to_cluster) distinct.insert(cl);
  CHECK(distinct.size() == root_to_cluster.size());
  CHECK(part.cluster_count() == distinct.size());
  std::size_t total = 0;
  part.for_each_cluster([&](ClusterId cl, std::size_t k) {
    total += k;
    for (PointId id : part.members(cl)) CHECK(part.cluster_of(id) == cl);
  });
  CHECK(total == c.size());
}

}  // namespace

TEST_CASE("cluster weight") {
  CHECK_THROWS_AS(ClusterWeight(0.6, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(ClusterWeight(-0.1, 1.1), std::invalid_argument);
  const ClusterWeight half(0.5, 0.5);
  CHECK(half.log_factor(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(half.log_factor(2) == doctest::Approx(std::log(0.5)));
  CHECK(half.log_factor(3) == doctest::Approx(std::log(0.25)));
  CHECK_FALSE(half.trivial());
  CHECK(ClusterWeight(1.0, 0.0).trivial());
  CHECK(ClusterWeight(1.0, 0.0).log_factor(5000) == 0.0);

  // Large clusters stay finite where the direct powers underflow.
  const ClusterWeight w(0.3, 0.7);
  const double v = w.log_factor(5000);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(5000 * std::log(0.7)));
  for (std::size_t k : {1u, 2u, 7u, 40u}) {
    CHECK(w.log_factor(k) == doctest::Approx(std::log(std::pow(0.3, k) + std::pow(0.7, k))));
    CHECK(w.log_factor(k) <= 1e-15);
  }
}

TEST_CASE("build_partition examples") {
  PointConfiguration c(Window(10.0), 1.0);
  SUBCASE("two points at distance 0.8 share a cluster") {
    c.insert({1.0, 1.0});
    c.insert({1.8, 1.0});
    CHECK(build_partition(c, 1.0).sizes() == std::vector<std::size_t>{2});
  }
  SUBCASE("two points at distance 1.2 are singletons") {
    c.insert({1.0, 1.0});
    c.insert({2.2, 1.0});
    CHECK(build_partition(c, 1.0).sizes() == std::vector<std::size_t>{1, 1});
  }
  SUBCASE("tangent points connect") {
    c.insert({1.0, 1.0});
    c.insert({2.0, 1.0});
    CHECK(build_partition(c, 1.0).sizes() == std::vector<std::size_t>{2});
  }
  SUBCASE("300 uniform points match the BFS oracle") {
    std::mt19937_64 g(21);
    const PointConfiguration r = oracle::random_config(g, 20.0, 300, 1.0);
    check_against_bfs(build_partition(r, 1.0), r);
  }
  CHECK_THROWS_AS(build_partition(c, 2.0), std::invalid_argument);
}

TEST_CASE("log_cluster_weight") {
  PointConfiguration c(Window(10.0), 1.0);
  CHECK(log_cluster_weight(build_partition(c, 1.0), 0.5, 0.5) == 0.0);
  for (int i = 0; i < 5; ++i) c.insert({1.0 + 1.5 * i, 5.0});
  CHECK(log_cluster_weight(build_partition(c, 1.0), 0.3, 0.7) ==
        doctest::Approx(0.0).epsilon(1e-14));
  PointConfiguration pair(Window(10.0), 1.0);
  pair.insert({1.0, 1.0});
  pair.insert({1.5, 1.0});
  CHECK(log_cluster_weight(build_partition(pair, 1.0), 0.5, 0.5) == doctest::Approx(std::log(0.5)));
  CHECK_THROWS_AS(log_cluster_weight(build_partition(pair, 1.0), 0.5, 0.6), std::invalid_argument);
  CHECK(log_cluster_weight(build_partition(pair, 1.0), 1.0, 0.0) == 0.0);
}

TEST_CASE("birth ratio examples") {
  PointConfiguration c(Window(10.0), 1.0);
  c.insert({2.0, 5.0});
  c.insert({3.8, 5.0});
  ClusterPartition part(c, 1.0);
  CHECK(birth_log_weight_ratio(part, c, {8.0, 8.0}, 0.5, 0.5) == 0.0);
  CHECK(birth_log_weight_ratio(part, c, {2.9, 5.0}, 0.5, 0.5) == doctest::Approx(std::log(0.25)));
  CHECK(part.point_count() == 2);
  CHECK(part.cluster_count() == 2);

  PointConfiguration empty(Window(10.0), 1.0);
  ClusterPartition ep(empty, 1.0);
  commit_birth(ep, empty, {5.0, 5.0});
  CHECK(ep.sizes() == std::vector<std::size_t>{1});

  // Three merges into one chain.
  commit_birth(part, c, {2.9, 5.0});
  commit_birth(part, c, {4.7, 5.0});
  commit_birth(part, c, {5.6, 5.0});
  check_against_bfs(part, c);
  CHECK(part.sizes() == std::vector<std::size_t>{5});
}

TEST_CASE("death ratio examples") {
  PointConfiguration c(Window(10.0), 1.0);
  SUBCASE("singleton death has ratio 0") {
    const PointId id = c.insert({5.0, 5.0});
    ClusterPartition part(c, 1.0);
    const DeathPlan plan = death_log_weight_ratio_and_plan(part, c, id, 0.5, 0.5);
    CHECK(plan.log_ratio == 0.0);
    part.commit_death(c, plan);
    CHECK(c.empty());
    CHECK(part.cluster_count() == 0);
  }
  SUBCASE("middle of a 3-chain splits it in two") {
    c.insert({1.0, 5.0});
    const PointId mid = c.insert({1.9, 5.0});
    c.insert({2.8, 5.0});
    ClusterPartition part(c, 1.0);
    const DeathPlan plan = death_log_weight_ratio_and_plan(part, c, mid, 0.5, 0.5);
    CHECK(plan.log_ratio == doctest::Approx(-std::log(0.25)));
    part.commit_death(c, plan);
    CHECK(part.sizes() == std::vector<std::size_t>{1, 1});
    check_against_bfs(part, c);
  }
  SUBCASE("unknown id") {
    ClusterPartition part(c, 1.0);
    CHECK_THROWS_AS(death_log_weight_ratio_and_plan(part, c, 4, 0.5, 0.5), std::out_of_range);
  }
}

TEST_CASE("birth then death of the same point sums to zero") {
  std::mt19937_64 g(22);
  PointConfiguration c = oracle::random_config(g, 12.0, 150, 1.0);
  ClusterPartition part(c, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point p = oracle::uniform_point(g, 12.0);
    const double up = birth_log_weight_ratio(part, c, p, 0.35, 0.65);
    const PointId id = commit_birth(part, c, p);
    const DeathPlan plan = death_log_weight_ratio_and_plan(part, c, id, 0.35, 0.65);
    CHECK(up + plan.log_ratio == 0.0);
    part.commit_death(c, plan);
  }
  check_against_bfs(part, c);
}

TEST_CASE("ratios match rebuild-from-scratch weight differences") {
  std::mt19937_64 g(23);
  const double a1 = 0.4;
  const double a2 = 0.6;
  for (int trial = 0; trial < 30; ++trial) {
    PointConfiguration c = oracle::random_config(g, 10.0, 120, 1.0);
    ClusterPartition part(c, 1.0);
    const double base = oracle::log_weight(c, 1.0, a1, a2);

    const Point p = oracle::uniform_point(g, 10.0);
    const double up = birth_log_weight_ratio(part, c, p, a1, a2);
    PointConfiguration grown = c;
    grown.insert(p);
    CHECK(up == doctest::Approx(oracle::log_weight(grown, 1.0, a1, a2) - base).epsilon(1e-9));

    const PointId id = c.ids()[g() % c.size()];
    const DeathPlan plan = death_log_weight_ratio_and_plan(part, c, id, a1, a2);
    PointConfiguration shrunk = c;
    shrunk.remove(id);
    CHECK(plan.log_ratio ==
          doctest::Approx(oracle::log_weight(shrunk, 1.0, a1, a2) - base).epsilon(1e-9));
  }
}

TEST_CASE("incremental partition equals rebuild over 10^4 random moves") {
  std::mt19937_64 g(24);
  const ClusterWeight w(0.5, 0.5);
  PointConfiguration c(Window(8.0), 1.0);
  ClusterPartition part(c, 1.0);
  for (int step = 0; step < 10000; ++step) {
    // Density hovers near 1.5 per unit area, around the connectivity threshold.
    const bool birth = c.empty() || (g() % 100) < (c.size() < 96 ? 60u : 40u);
    if (birth) {
      const BirthPlan plan = part.plan_birth(c, oracle::uniform_point(g, 8.0), w);
      part.commit_birth(c, plan);
    } else {
      const PointId id = c.ids()[g() % c.size()];
      part.commit_death(c, part.plan_death(c, id, w));
    }
    if (step % 250 == 0) check_against_bfs(part, c);
  }
  check_against_bfs(part, c);
  const ClusterPartition fresh(c, 1.0);
  CHECK(fresh.sizes() == part.sizes());
  CHECK(log_cluster_weight(part, 0.5, 0.5) ==
        doctest::Approx(log_cluster_weight(fresh, 0.5, 0.5)).epsilon(1e-12));
}
