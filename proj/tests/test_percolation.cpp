#include <algorithm>
#include <random>

#include "areaperc/percolation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace areaperc;

namespace {

// Direct reading of the event over the all-pairs component labels.
bool percolates_oracle(const PointConfiguration& c, double r) {
  const auto label = oracle::components(c, 2.0 * r);
  const Point mid = c.window().center();
  for (const auto& [id, root] : label) {
    if (std::sqrt(squared_distance(c[id], mid)) > r) continue;
    for (const auto& [other, root2] : label) {
      if (root2 == root && c.window().distance_to_boundary(c[other]) <= r) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("center_to_boundary examples") {
  PointConfiguration c(Window(100.0), 2.0);
  CHECK_FALSE(center_to_boundary(c));
  c.insert({50.0, 50.0});
  CHECK_FALSE(center_to_boundary(c));
  PointId last = 0;
  for (int k = 1; 50.0 + 1.9 * k <= 99.5; ++k) last = c.insert({50.0, 50.0 + 1.9 * k});
  CHECK(c[last].y == doctest::Approx(99.4));
  CHECK(center_to_boundary(c));
  c.remove(last);
  CHECK_FALSE(center_to_boundary(c));
}

TEST_CASE("closed inequalities at the center and the boundary") {
  PointConfiguration c(Window(4.0), 2.0);
  c.insert({1.0, 2.0});
  CHECK(center_to_boundary(c));
  PointConfiguration d(Window(4.0), 2.0);
  d.insert({1.0 - 1e-9, 2.0});
  CHECK_FALSE(center_to_boundary(d));
}

TEST_CASE("decision matches the component oracle on random scenes") {
  std::mt19937_64 g(51);
  int positives = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 60 + 4 * static_cast<std::size_t>(trial);
    const PointConfiguration c = oracle::random_config(g, 20.0, n, 2.0);
    const bool got = center_to_boundary(c);
    CHECK(got == percolates_oracle(c, 1.0));
    positives += got ? 1 : 0;
  }
  CHECK(positives > 5);
  CHECK(positives < 75);
}

TEST_CASE("monotone in points and in radius") {
  std::mt19937_64 g(52);
  for (int trial = 0; trial < 30; ++trial) {
    PointConfiguration c = oracle::random_config(g, 20.0, 150, 2.0);
    bool prev = center_to_boundary(c);
    for (int i = 0; i < 40; ++i) {
      c.insert(oracle::uniform_point(g, 20.0));
      const bool now = center_to_boundary(c);
      if (prev) CHECK(now);
      prev = now;
    }
    if (center_to_boundary(c, {0.8})) CHECK(center_to_boundary(c, {1.2}));
  }
}

TEST_CASE("decision ignores the insertion order") {
  std::mt19937_64 g(53);
  const PointConfiguration c = oracle::random_config(g, 15.0, 200, 2.0);
  auto pts = c.points();
  for (int k = 0; k < 5; ++k) {
    std::shuffle(pts.begin(), pts.end(), g);
    PointConfiguration d(c.window(), 2.0);
    for (const Point& p : pts) d.insert(p);
    CHECK(center_to_boundary(d) == center_to_boundary(c));
  }
}

TEST_CASE("component_sizes") {
  PointConfiguration c(Window(30.0), 2.0);
  CHECK(component_sizes(c, 2.0).empty());
  c.insert({1.0, 1.0});
  c.insert({20.0, 20.0});
  CHECK(component_sizes(c, 2.0) == std::vector<std::size_t>{1, 1});
  std::mt19937_64 g(54);
  const PointConfiguration r = oracle::random_config(g, 20.0, 250, 2.0);
  CHECK(component_sizes(r, 2.0) == oracle::component_sizes(r, 2.0));
  CHECK(component_sizes(r, 1.0) == oracle::component_sizes(r, 1.0));
}
