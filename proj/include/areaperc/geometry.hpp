#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace areaperc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const Point& a, const Point& b);

/// The square [0, side]^2.
class Window {
 public:
  explicit Window(double side);

  double side() const { return side_; }
  double area() const { return side_ * side_; }
  bool contains(const Point& p) const;
  Point center() const { return {0.5 * side_, 0.5 * side_}; }
  /// Euclidean distance from an interior point to the boundary.
  double distance_to_boundary(const Point& p) const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  double side_;
};

using PointId = std::uint32_t;

/// Finite point set in a Window, indexed by a uniform grid.
///
/// Ids are stable slots: removing a point frees its slot for a later insert,
/// and no other id changes. `ids()` is a dense list of the live ids (in an
/// order that depends on the mutation history), which supports uniform
/// selection of a live point in O(1).
///
/// Radius queries are exact for any distance up to `cell_size()`: only the
/// 3x3 block of cells around the query point is inspected.
class PointConfiguration {
 public:
  PointConfiguration(Window window, double cell_size);

  const Window& window() const { return window_; }
  double cell_size() const { return cell_size_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  /// One past the largest slot id ever handed out.
  std::size_t capacity() const { return slots_.size(); }

  PointId insert(const Point& p);
  Point remove(PointId id);
  bool contains(PointId id) const;
  const Point& operator[](PointId id) const { return slots_[id].point; }
  const Point& at(PointId id) const;

  std::span<const PointId> ids() const { return ids_; }
  /// Live points in `ids()` order.
  std::vector<Point> points() const;

  /// Ids q with |p - q| <= dist. Throws std::invalid_argument when
  /// dist > cell_size().
  std::vector<PointId> neighbors_within(const Point& p, double dist) const;

  /// Same as neighbors_within but appends into `out` (cleared first) and
  /// skips `exclude`.
  void neighbors_within(const Point& p, double dist, std::vector<PointId>& out,
                        PointId exclude = kNoPoint) const;

  /// Bucket contents keyed by linear cell index, for index verification.
  std::span<const PointId> bucket(std::size_t cell) const { return buckets_[cell]; }
  std::size_t cells_per_side() const { return cells_per_side_; }
  std::size_t cell_of(const Point& p) const;

  static constexpr PointId kNoPoint = ~PointId{0};

 private:
  struct Slot {
    Point point;
    std::uint32_t cell = 0;
    std::uint32_t in_bucket = 0;
    std::uint32_t in_ids = 0;
    bool live = false;
  };

  Window window_;
  double cell_size_;
  double inv_cell_;
  std::size_t cells_per_side_;
  std::vector<Slot> slots_;
  std::vector<PointId> free_;
  std::vector<PointId> ids_;
  std::vector<std::vector<PointId>> buckets_;
};

/// Snapshot text: "# L=<side>" then one "x y" line per point.
void write_snapshot(std::ostream& os, const PointConfiguration& config);
void write_snapshot(const std::string& path, const PointConfiguration& config);
PointConfiguration read_snapshot(std::istream& is, double cell_size);

}  // namespace areaperc
