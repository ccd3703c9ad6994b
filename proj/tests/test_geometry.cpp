#include <algorithm>
#include <random>
#include <sstream>

#include "areaperc/format.hpp"
#include "areaperc/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace areaperc;

namespace {

std::vector<PointId> sorted(std::vector<PointId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Recomputes the bucket of every live point and compares with the index.
void check_index(const PointConfiguration& c) {
  std::size_t total = 0;
  const std::size_t cells = c.cells_per_side() * c.cells_per_side();
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (PointId id : c.bucket(cell)) {
      REQUIRE(c.contains(id));
      CHECK(c.cell_of(c[id]) == cell);
      ++total;
    }
  }
  CHECK(total == c.size());
}

}  // namespace

TEST_CASE("window basics") {
  const Window w(100.0);
  CHECK(w.area() == 10000.0);
  CHECK(w.contains({0.0, 100.0}));
  CHECK_FALSE(w.contains({-1e-12, 5.0}));
  CHECK(w.distance_to_boundary({50.0, 99.5}) == doctest::Approx(0.5));
  CHECK(w.distance_to_boundary({3.0, 40.0}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(Window(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Window(-2.0), std::invalid_argument);
}

TEST_CASE("insert and remove") {
  PointConfiguration c(Window(10.0), 2.0);
  SUBCASE("insert into empty config gives count 1") {
    c.insert({1.0, 1.0});
    CHECK(c.size() == 1);
  }
  SUBCASE("insert then remove restores the original") {
    c.insert({2.0, 3.0});
    const auto before = c.points();
    const PointId id = c.insert({4.0, 4.0});
    CHECK(c.remove(id) == Point{4.0, 4.0});
    CHECK(c.points() == before);
  }
  SUBCASE("remove only point leaves it empty") {
    const PointId id = c.insert({5.0, 5.0});
    c.remove(id);
    CHECK(c.empty());
    CHECK(c.neighbors_within({5.0, 5.0}, 2.0).empty());
  }
  SUBCASE("remove from two points keeps the other unchanged") {
    const PointId a = c.insert({1.0, 2.0});
    const PointId b = c.insert({7.0, 8.0});
    c.remove(a);
    CHECK(c.size() == 1);
    CHECK(c.at(b) == Point{7.0, 8.0});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(c.insert({10.5, 1.0}), std::out_of_range);
    CHECK_THROWS_AS(c.remove(3), std::out_of_range);
    const PointId id = c.insert({1.0, 1.0});
    c.remove(id);
    CHECK_THROWS_AS(c.remove(id), std::out_of_range);
    CHECK_THROWS_AS(c.at(id), std::out_of_range);
  }
  SUBCASE("freed slots are reused and other ids stay put") {
    const PointId a = c.insert({1.0, 1.0});
    const PointId b = c.insert({2.0, 2.0});
    c.remove(a);
    const PointId d = c.insert({3.0, 3.0});
    CHECK(d == a);
    CHECK(c[b] == Point{2.0, 2.0});
  }
  SUBCASE("points on the far edge are indexed") {
    const PointId id = c.insert({10.0, 10.0});
    CHECK(c.neighbors_within({9.0, 10.0}, 1.0) == std::vector<PointId>{id});
  }
}

TEST_CASE("neighbors_within uses closed balls") {
  PointConfiguration c(Window(5.0), 1.0);
  const PointId a = c.insert({0.0, 0.0});
  const PointId b = c.insert({1.0, 0.0});
  std::vector<PointId> out;
  c.neighbors_within(c[a], 1.0, out, a);
  CHECK(out == std::vector<PointId>{b});
  c.neighbors_within(c[b], 1.0, out, b);
  CHECK(out == std::vector<PointId>{a});
  CHECK(PointConfiguration(Window(5.0), 1.0).neighbors_within({1.0, 1.0}, 1.0).empty());
  CHECK_THROWS_AS(c.neighbors_within({0.0, 0.0}, 1.5), std::invalid_argument);
}

TEST_CASE("neighbors_within matches a brute-force scan") {
  std::mt19937_64 g(11);
  for (std::size_t n : {100u, 500u}) {
    const PointConfiguration c = oracle::random_config(g, 20.0, n, 2.0);
    for (PointId id : c.ids()) {
      for (double d : {0.5, 1.0, 2.0}) {
        CHECK(sorted(c.neighbors_within(c[id], d)) == oracle::neighbors(c, c[id], d));
      }
    }
    for (int i = 0; i < 200; ++i) {
      const Point p = oracle::uniform_point(g, 20.0);
      CHECK(sorted(c.neighbors_within(p, 2.0)) == oracle::neighbors(c, p, 2.0));
    }
  }
}

TEST_CASE("neighbor relation is symmetric and monotone in the radius") {
  std::mt19937_64 g(12);
  const PointConfiguration c = oracle::random_config(g, 15.0, 400, 2.0);
  for (PointId p : c.ids()) {
    const auto small = sorted(c.neighbors_within(c[p], 0.7));
    const auto big = sorted(c.neighbors_within(c[p], 1.4));
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    for (PointId q : small) {
      const auto back = c.neighbors_within(c[q], 0.7);
      CHECK(std::find(back.begin(), back.end(), p) != back.end());
    }
  }
}

TEST_CASE("index survives randomized inserts and removals") {
  std::mt19937_64 g(13);
  PointConfiguration c(Window(12.0), 1.0);
  std::vector<PointId> live;
  for (int step = 0; step < 5000; ++step) {
    if (live.empty() || g() % 2 == 0) {
      live.push_back(c.insert(oracle::uniform_point(g, 12.0)));
    } else {
      const std::size_t k = g() % live.size();
      c.remove(live[k]);
      live[k] = live.back();
      live.pop_back();
    }
    if (step % 500 == 0) check_index(c);
  }
  check_index(c);
  CHECK(c.size() == live.size());
  for (int i = 0; i < 200; ++i) {
    const Point p = oracle::uniform_point(g, 12.0);
    CHECK(sorted(c.neighbors_within(p, 1.0)) == oracle::neighbors(c, p, 1.0));
  }
}

TEST_CASE("snapshot round trip") {
  std::mt19937_64 g(14);
  const PointConfiguration c = oracle::random_config(g, 30.0, 50, 2.0);
  std::ostringstream os;
  write_snapshot(os, c);
  CHECK(os.str().rfind("# L=30\n", 0) == 0);
  std::istringstream is(os.str());
  const PointConfiguration back = read_snapshot(is, 2.0);
  CHECK(back.window() == c.window());
  CHECK(back.points() == c.points());

  std::istringstream bad("# L=5\n1 2\n7 1\n");
  CHECK_THROWS(read_snapshot(bad, 1.0));
}

TEST_CASE("shortest round-trip decimal formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  std::mt19937_64 g(15);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(g);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(parse_double(" 1.5\r") == 1.5);
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}
