#include "areaperc/area.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace areaperc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Interval = std::pair<double, double>;

// Adds the angular interval (mid - half, mid + half) reduced to [0, 2pi).
void add_arc(std::vector<Interval>& out, double mid, double half) {
  if (half >= std::numbers::pi) {
    out.emplace_back(0.0, kTwoPi);
    return;
  }
  double a = std::fmod(mid - half, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  const double b = a + 2.0 * half;
  if (b <= kTwoPi) {
    out.emplace_back(a, b);
  } else {
    out.emplace_back(a, kTwoPi);
    out.emplace_back(0.0, b - kTwoPi);
  }
}

// Integral of (x dy - y dx)/2 along the circle (c, r) over [a, b].
double arc_term(const Point& c, double r, double a, double b) {
  return 0.5 * (r * r * (b - a) + r * (c.x * (std::sin(b) - std::sin(a)) -
                                        c.y * (std::cos(b) - std::cos(a))));
}

// Measure of the union of intervals clipped to [lo, hi]; sorts `iv`.
double union_length(std::vector<Interval>& iv, double lo, double hi) {
  std::sort(iv.begin(), iv.end());
  double total = 0.0;
  double cur_a = 0.0, cur_b = 0.0;
  bool open = false;
  for (auto [a, b] : iv) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (b <= a) continue;
    if (open && a <= cur_b) {
      cur_b = std::max(cur_b, b);
    } else {
      if (open) total += cur_b - cur_a;
      cur_a = a;
      cur_b = b;
      open = true;
    }
  }
  if (open) total += cur_b - cur_a;
  return total;
}

// Sum of arc_term over the parts of circle i outside every other disk and
// inside the window.
double free_arc_term(std::span<const Point> centers, std::size_t i,
                     std::span<const std::size_t> others, double r, double side,
                     std::vector<Interval>& excluded) {
  const Point& c = centers[i];
  excluded.clear();
  for (std::size_t j : others) {
    const double dx = centers[j].x - c.x;
    const double dy = centers[j].y - c.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d == 0.0) {
      if (j < i) return 0.0;  // duplicate disk: the lower index owns the boundary
      continue;
    }
    if (d >= 2.0 * r) continue;
    add_arc(excluded, std::atan2(dy, dx), std::acos(d / (2.0 * r)));
  }
  // Outward normal angle and distance to each window edge.
  const std::pair<double, double> edges[] = {
      {std::numbers::pi, c.x}, {0.0, side - c.x}, {-0.5 * std::numbers::pi, c.y},
      {0.5 * std::numbers::pi, side - c.y}};
  for (const auto& [psi, delta] : edges) {
    if (delta < r) add_arc(excluded, psi, std::acos(std::clamp(delta / r, -1.0, 1.0)));
  }

  std::sort(excluded.begin(), excluded.end());
  double total = 0.0;
  double pos = 0.0;
  for (const auto& [a, b] : excluded) {
    if (a > pos) total += arc_term(c, r, pos, a);
    pos = std::max(pos, b);
  }
  if (pos < kTwoPi) total += arc_term(c, r, pos, kTwoPi);
  return total;
}

}  // namespace

double union_area(std::span<const Point> centers, double r, const Window& window) {
  if (!(r > 0.0)) throw std::invalid_argument("disk radius must be positive");
  const std::size_t n = centers.size();
  if (n == 0) return 0.0;
  const double side = window.side();

  std::vector<std::vector<std::size_t>> nb(n);
  if (n <= 64) {
    const double reach2 = 4.0 * r * r;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (squared_distance(centers[i], centers[j]) < reach2) {
          nb[i].push_back(j);
          nb[j].push_back(i);
        }
      }
    }
  } else {
    PointConfiguration grid(window, 2.0 * r);
    for (const Point& p : centers) grid.insert(p);  // fresh grid: id == index
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < n; ++i) {
      grid.neighbors_within(centers[i], 2.0 * r, ids, static_cast<PointId>(i));
      nb[i].assign(ids.begin(), ids.end());
    }
  }

  double total = 0.0;
  std::vector<Interval> scratch;
  for (std::size_t i = 0; i < n; ++i) total += free_arc_term(centers, i, nb[i], r, side, scratch);

  // Covered stretches of the right (x = side, upward) and top (y = side,
  // leftward) edges; the other two edges contribute nothing to the integral.
  std::vector<Interval> right, top;
  for (const Point& c : centers) {
    const double dr = side - c.x;
    if (std::abs(dr) < r) {
      const double w = std::sqrt(r * r - dr * dr);
      right.emplace_back(c.y - w, c.y + w);
    }
    const double dt = side - c.y;
    if (std::abs(dt) < r) {
      const double w = std::sqrt(r * r - dt * dt);
      top.emplace_back(c.x - w, c.x + w);
    }
  }
  total += 0.5 * side * (union_length(right, 0.0, side) + union_length(top, 0.0, side));
  return total;
}

double covered_area(const PointConfiguration& config, double r) {
  const auto pts = config.points();
  return union_area(pts, r, config.window());
}

namespace {

// Exposed area of `p` against `others` (all within 2r of p).
double exposed_area(const Point& p, std::vector<Point>& others, double r, const Window& window) {
  const double without = union_area(others, r, window);
  others.push_back(p);
  const double with = union_area(others, r, window);
  others.pop_back();
  return std::max(0.0, with - without);
}

void require_reach(const PointConfiguration& config, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("disk radius must be positive");
  if (2.0 * r > config.cell_size()) {
    throw std::invalid_argument("configuration grid is finer than the disk interaction range");
  }
}

}  // namespace

double delta_area_on_birth(const PointConfiguration& config, const Point& p, double r) {
  require_reach(config, r);
  std::vector<Point> others;
  for (PointId q : config.neighbors_within(p, 2.0 * r)) others.push_back(config[q]);
  return exposed_area(p, others, r, config.window());
}

double delta_area_on_death(const PointConfiguration& config, PointId id, double r) {
  require_reach(config, r);
  const Point p = config.at(id);
  std::vector<PointId> ids;
  config.neighbors_within(p, 2.0 * r, ids, id);
  std::vector<Point> others;
  for (PointId q : ids) others.push_back(config[q]);
  return exposed_area(p, others, r, config.window());
}

DirectAreaChain::DirectAreaChain(Window window, const AreaParams& params, std::uint64_t seed,
                                 double radius)
    : params_(params),
      radius_(radius),
      log_mass_(std::log(params.z * window.area())),
      config_(window, 2.0 * radius),
      rng_(seed) {
  params_from_area(params);  // validates
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
}

bool DirectAreaChain::step() {
  ++steps_;
  const double side = config_.window().side();
  const auto n = static_cast<double>(config_.size());
  const auto accept = [this](double log_ratio) {
    return log_ratio >= 0.0 || rng_.uniform() < std::exp(log_ratio);
  };
  const auto exposed = [this](const Point& p, PointId self) {
    config_.neighbors_within(p, 2.0 * radius_, scratch_ids_, self);
    scratch_pts_.clear();
    for (PointId q : scratch_ids_) scratch_pts_.push_back(config_[q]);
    return exposed_area(p, scratch_pts_, radius_, config_.window());
  };

  if (rng_.uniform() < 0.5) {
    const Point p{rng_.uniform(0.0, side), rng_.uniform(0.0, side)};
    const double dh = params_.beta > 0.0 ? exposed(p, PointConfiguration::kNoPoint) : 0.0;
    if (accept(log_mass_ - std::log(n + 1.0) - params_.beta * dh)) {
      config_.insert(p);
      return true;
    }
    return false;
  }
  if (config_.empty()) return false;
  const PointId id = config_.ids()[rng_.below(config_.size())];
  const double dh = params_.beta > 0.0 ? exposed(config_[id], id) : 0.0;
  if (accept(std::log(n) - log_mass_ + params_.beta * dh)) {
    config_.remove(id);
    return true;
  }
  return false;
}

void DirectAreaChain::run(std::uint64_t n_steps) {
  for (std::uint64_t i = 0; i < n_steps; ++i) step();
}

PointConfiguration run_direct_chain(const AreaParams& params, const Window& window,
                                    std::uint64_t n_steps, std::uint64_t seed) {
  DirectAreaChain chain(window, params, seed);
  chain.run(n_steps);
  return chain.config();
}

}  // namespace areaperc
