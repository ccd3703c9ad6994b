#include "areaperc/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "areaperc/format.hpp"

namespace areaperc {

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

Window::Window(double side) : side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw std::invalid_argument("window side must be positive and finite");
  }
}

bool Window::contains(const Point& p) const {
  return p.x >= 0.0 && p.x <= side_ && p.y >= 0.0 && p.y <= side_;
}

double Window::distance_to_boundary(const Point& p) const {
  return std::min({p.x, p.y, side_ - p.x, side_ - p.y});
}

PointConfiguration::PointConfiguration(Window window, double cell_size)
    : window_(window), cell_size_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw std::invalid_argument("grid cell size must be positive and finite");
  }
  inv_cell_ = 1.0 / cell_size_;
  // A point on the far edge (coordinate == side) gets its own last cell.
  cells_per_side_ = static_cast<std::size_t>(std::floor(window_.side() * inv_cell_)) + 1;
  buckets_.resize(cells_per_side_ * cells_per_side_);
}

std::size_t PointConfiguration::cell_of(const Point& p) const {
  const auto clamp = [this](double v) {
    const auto c = static_cast<std::ptrdiff_t>(v * inv_cell_);
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(c, 0, static_cast<std::ptrdiff_t>(cells_per_side_) - 1));
  };
  return clamp(p.y) * cells_per_side_ + clamp(p.x);
}

PointId PointConfiguration::insert(const Point& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !window_.contains(p)) {
    throw std::out_of_range("point (" + format_double(p.x) + ", " + format_double(p.y) +
                            ") lies outside the window");
  }
  PointId id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<PointId>(slots_.size());
    slots_.emplace_back();
  }
  Slot& s = slots_[id];
  s.point = p;
  s.live = true;
  s.cell = static_cast<std::uint32_t>(cell_of(p));
  auto& b = buckets_[s.cell];
  s.in_bucket = static_cast<std::uint32_t>(b.size());
  b.push_back(id);
  s.in_ids = static_cast<std::uint32_t>(ids_.size());
  ids_.push_back(id);
  return id;
}

Point PointConfiguration::remove(PointId id) {
  if (!contains(id)) {
    throw std::out_of_range("unknown point id " + std::to_string(id));
  }
  Slot& s = slots_[id];

  auto& b = buckets_[s.cell];
  const PointId moved_b = b.back();
  b[s.in_bucket] = moved_b;
  slots_[moved_b].in_bucket = s.in_bucket;
  b.pop_back();

  const PointId moved_i = ids_.back();
  ids_[s.in_ids] = moved_i;
  slots_[moved_i].in_ids = s.in_ids;
  ids_.pop_back();

  s.live = false;
  free_.push_back(id);
  return s.point;
}

bool PointConfiguration::contains(PointId id) const {
  return id < slots_.size() && slots_[id].live;
}

const Point& PointConfiguration::at(PointId id) const {
  if (!contains(id)) {
    throw std::out_of_range("unknown point id " + std::to_string(id));
  }
  return slots_[id].point;
}

std::vector<Point> PointConfiguration::points() const {
  std::vector<Point> out;
  out.reserve(ids_.size());
  for (PointId id : ids_) out.push_back(slots_[id].point);
  return out;
}

std::vector<PointId> PointConfiguration::neighbors_within(const Point& p, double dist) const {
  std::vector<PointId> out;
  neighbors_within(p, dist, out);
  return out;
}

void PointConfiguration::neighbors_within(const Point& p, double dist, std::vector<PointId>& out,
                                          PointId exclude) const {
  if (!(dist > 0.0)) throw std::invalid_argument("query distance must be positive");
  if (dist > cell_size_) {
    throw std::invalid_argument("query distance " + format_double(dist) +
                                " exceeds grid cell size " + format_double(cell_size_));
  }
  out.clear();
  const double d2 = dist * dist;
  const auto n = static_cast<std::ptrdiff_t>(cells_per_side_);
  const auto cx = static_cast<std::ptrdiff_t>(std::floor(p.x * inv_cell_));
  const auto cy = static_cast<std::ptrdiff_t>(std::floor(p.y * inv_cell_));
  for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(cy - 1, 0); j <= std::min(cy + 1, n - 1); ++j) {
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(cx - 1, 0); i <= std::min(cx + 1, n - 1);
         ++i) {
      for (PointId q : buckets_[static_cast<std::size_t>(j * n + i)]) {
        if (q != exclude && squared_distance(p, slots_[q].point) <= d2) out.push_back(q);
      }
    }
  }
}

void write_snapshot(std::ostream& os, const PointConfiguration& config) {
  os << "# L=" << format_double(config.window().side()) << '\n';
  for (PointId id : config.ids()) {
    const Point& p = config[id];
    os << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  }
}

void write_snapshot(const std::string& path, const PointConfiguration& config) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_snapshot(os, config);
  if (!os) throw std::runtime_error("failed writing " + path);
}

PointConfiguration read_snapshot(std::istream& is, double cell_size) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# L=", 0) != 0) {
    throw std::runtime_error("snapshot must start with '# L=<side>'");
  }
  PointConfiguration config(Window(parse_double(line.substr(4))), cell_size);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string xs, ys;
    if (!(ls >> xs >> ys)) throw std::runtime_error("bad snapshot line: " + line);
    config.insert({parse_double(xs), parse_double(ys)});
  }
  return config;
}

}  // namespace areaperc
