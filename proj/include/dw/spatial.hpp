#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "dw/mesh.hpp"

namespace dw {

/// Uniform hash grid over a growable point set. Supports radius queries and
/// nearest-neighbour search; used wherever a brute-force scan would be
/// quadratic.
class PointGrid {
 public:
  explicit PointGrid(double cell_size);
  PointGrid(std::span<const Point3> points, double cell_size);

  void insert(const Point3& p);
  std::size_t size() const { return points_.size(); }
  const std::vector<Point3>& points() const { return points_; }

  /// Indices of points with |p - center| <= radius, in increasing order.
  std::vector<int> within(const Point3& center, double radius) const;

  /// Index and distance of the nearest point; index -1 when empty.
  std::pair<int, double> nearest(const Point3& p) const;

  /// True when some point lies within `radius` of p.
  bool any_within(const Point3& p, double radius) const;

 private:
  using Key = std::int64_t;
  Key key(std::int64_t i, std::int64_t j, std::int64_t k) const;
  std::int64_t cell(double x) const;

  double cell_size_;
  std::vector<Point3> points_;
  std::unordered_map<Key, std::vector<int>> cells_;
  Point3 lo_, hi_;  // bounding box of inserted points
};

/// Default hash cell size for a point cloud: a small multiple of the typical
/// spacing estimated from the bounding box and count.
double suggested_cell_size(std::span<const Point3> points);

}  // namespace dw
