#pragma once

// Brute-force reference implementations used by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <queue>
#include <random>
#include <vector>

#include "areaperc/geometry.hpp"

namespace oracle {

using areaperc::Point;
using areaperc::PointConfiguration;
using areaperc::PointId;

inline std::vector<PointId> neighbors(const PointConfiguration& c, const Point& p, double d,
                                      PointId exclude = PointConfiguration::kNoPoint) {
  std::vector<PointId> out;
  for (PointId id : c.ids()) {
    if (id == exclude) continue;
    const double dx = c[id].x - p.x;
    const double dy = c[id].y - p.y;
    if (std::sqrt(dx * dx + dy * dy) <= d) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Component label per live id, by BFS over the all-pairs graph. Labels are
/// the smallest id of each component.
inline std::map<PointId, PointId> components(const PointConfiguration& c, double d) {
  std::map<PointId, PointId> label;
  std::vector<PointId> ids(c.ids().begin(), c.ids().end());
  std::sort(ids.begin(), ids.end());
  for (PointId s : ids) {
    if (label.count(s)) continue;
    std::queue<PointId> q;
    q.push(s);
    label[s] = s;
    while (!q.empty()) {
      const PointId u = q.front();
      q.pop();
      for (PointId v : ids) {
        if (!label.count(v) && std::sqrt(areaperc::squared_distance(c[u], c[v])) <= d) {
          label[v] = s;
          q.push(v);
        }
      }
    }
  }
  return label;
}

inline std::vector<std::size_t> component_sizes(const PointConfiguration& c, double d) {
  std::map<PointId, std::size_t> count;
  for (const auto& [id, root] : components(c, d)) ++count[root];
  std::vector<std::size_t> out;
  for (const auto& [root, n] : count) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

/// Sum over components of log(a1^k + a2^k), evaluated directly.
inline double log_weight(const PointConfiguration& c, double d, double a1, double a2) {
  double s = 0.0;
  for (std::size_t k : oracle::component_sizes(c, d)) {
    s += std::log(std::pow(a1, static_cast<double>(k)) + std::pow(a2, static_cast<double>(k)));
  }
  return s;
}

inline Point uniform_point(std::mt19937_64& g, double side) {
  std::uniform_real_distribution<double> u(0.0, side);
  const double x = u(g);
  return {x, u(g)};
}

inline PointConfiguration random_config(std::mt19937_64& g, double side, std::size_t n,
                                        double cell) {
  PointConfiguration c(areaperc::Window(side), cell);
  for (std::size_t i = 0; i < n; ++i) c.insert(uniform_point(g, side));
  return c;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// Weighted least-squares non-decreasing fit (pool adjacent violators).
inline std::vector<double> isotonic(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double mean, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], w[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double tw = a.weight + b.weight;
      a.mean = (a.mean * a.weight + b.mean * b.weight) / tw;
      a.weight = tw;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

}  // namespace oracle
