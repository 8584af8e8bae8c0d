#include "dw/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dw {

PointGrid::PointGrid(double cell_size) : cell_size_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw Error(ErrorKind::InvalidArgument, "PointGrid cell size must be positive");
  }
  lo_.setConstant(std::numeric_limits<double>::infinity());
  hi_.setConstant(-std::numeric_limits<double>::infinity());
}

PointGrid::PointGrid(std::span<const Point3> points, double cell_size) : PointGrid(cell_size) {
  points_.reserve(points.size());
  for (const auto& p : points) insert(p);
}

std::int64_t PointGrid::cell(double x) const { return static_cast<std::int64_t>(std::floor(x / cell_size_)); }

PointGrid::Key PointGrid::key(std::int64_t i, std::int64_t j, std::int64_t k) const {
  // 21 bits per axis is plenty for desk-scale grids.
  const std::int64_t mask = (1 << 21) - 1;
  return ((i & mask) << 42) | ((j & mask) << 21) | (k & mask);
}

void PointGrid::insert(const Point3& p) {
  const int index = static_cast<int>(points_.size());
  points_.push_back(p);
  lo_ = lo_.cwiseMin(p);
  hi_ = hi_.cwiseMax(p);
  cells_[key(cell(p.x()), cell(p.y()), cell(p.z()))].push_back(index);
}

std::vector<int> PointGrid::within(const Point3& center, double radius) const {
  std::vector<int> out;
  if (points_.empty()) return out;
  const Point3 lo = (center.array() - radius).max(lo_.array()).matrix();
  const Point3 hi = (center.array() + radius).min(hi_.array()).matrix();
  if ((lo.array() > hi.array()).any()) return out;
  const double r2 = radius * radius;
  const std::int64_t i0 = cell(lo.x()), i1 = cell(hi.x());
  const std::int64_t j0 = cell(lo.y()), j1 = cell(hi.y());
  const std::int64_t k0 = cell(lo.z()), k1 = cell(hi.z());
  const double span = static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1) *
                      static_cast<double>(k1 - k0 + 1);
  if (span > 4.0 * static_cast<double>(points_.size()) + 64.0) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if ((points_[i] - center).squaredNorm() <= r2) out.push_back(static_cast<int>(i));
    }
    return out;
  }
  for (std::int64_t i = i0; i <= i1; ++i)
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t k = k0; k <= k1; ++k) {
        auto it = cells_.find(key(i, j, k));
        if (it == cells_.end()) continue;
        for (int idx : it->second) {
          if ((points_[idx] - center).squaredNorm() <= r2) out.push_back(idx);
        }
      }
  std::sort(out.begin(), out.end());
  return out;
}

bool PointGrid::any_within(const Point3& p, double radius) const {
  if (points_.empty()) return false;
  const double r2 = radius * radius;
  const std::int64_t i0 = cell(p.x() - radius), i1 = cell(p.x() + radius);
  const std::int64_t j0 = cell(p.y() - radius), j1 = cell(p.y() + radius);
  const std::int64_t k0 = cell(p.z() - radius), k1 = cell(p.z() + radius);
  const double span = static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1) *
                      static_cast<double>(k1 - k0 + 1);
  if (span > 4.0 * static_cast<double>(points_.size()) + 64.0) {
    for (const auto& q : points_)
      if ((q - p).squaredNorm() <= r2) return true;
    return false;
  }
  for (std::int64_t i = i0; i <= i1; ++i)
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t k = k0; k <= k1; ++k) {
        auto it = cells_.find(key(i, j, k));
        if (it == cells_.end()) continue;
        for (int idx : it->second)
          if ((points_[idx] - p).squaredNorm() <= r2) return true;
      }
  return false;
}

std::pair<int, double> PointGrid::nearest(const Point3& p) const {
  if (points_.empty()) return {-1, std::numeric_limits<double>::infinity()};
  // Grow the search radius until a hit is certain to be the nearest.
  const double extent = (hi_ - lo_).norm() + (p - lo_).norm() + cell_size_;
  double radius = cell_size_;
  while (true) {
    const auto hits = within(p, radius);
    if (!hits.empty()) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int idx : hits) {
        const double d = (points_[idx] - p).norm();
        if (d < best_d) {
          best_d = d;
          best = idx;
        }
      }
      return {best, best_d};
    }
    if (radius > extent) break;
    radius *= 2.0;
  }
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = (points_[i] - p).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return {best, best_d};
}

double suggested_cell_size(std::span<const Point3> points) {
  if (points.size() < 2) return 1.0;
  Point3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 ext = hi - lo;
  // Treat the cloud as two-dimensional (points on a surface).
  std::array<double, 3> e{ext.x(), ext.y(), ext.z()};
  std::sort(e.begin(), e.end());
  const double area = std::max(e[1] * e[2], e[2] * e[2] * 1e-6);
  const double spacing = std::sqrt(area / static_cast<double>(points.size()));
  return std::max(spacing * 2.0, 1e-9 * (e[2] + 1.0));
}

}  // namespace dw
