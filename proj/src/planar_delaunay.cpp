#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "dw/generators.hpp"

namespace dw::generators {
namespace {

constexpr int kInf = -1;  // symbolic vertex at infinity

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Positive when d is inside the circle through counterclockwise a, b, c.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const Vec2 ad = a - d, bd = b - d, cd = c - d;
  const double a2 = ad.squaredNorm(), b2 = bd.squaredNorm(), c2 = cd.squaredNorm();
  return ad.x() * (bd.y() * c2 - b2 * cd.y()) - ad.y() * (bd.x() * c2 - b2 * cd.x()) +
         a2 * (bd.x() * cd.y() - bd.y() * cd.x());
}

std::uint64_t dkey(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct Triangulator {
  std::span<const Vec2> p;
  double scale = 1.0;
  std::vector<std::array<int, 3>> tris;  // ghost triangles carry kInf last
  std::vector<char> alive;
  std::unordered_map<std::uint64_t, int> edge_owner;  // directed edge -> triangle

  void add(int a, int b, int c) {
    if (a == kInf) {
      std::swap(a, b);
      std::swap(b, c);
    } else if (b == kInf) {
      std::swap(b, c);
      std::swap(a, b);
    }
    const int id = static_cast<int>(tris.size());
    tris.push_back({a, b, c});
    alive.push_back(1);
    edge_owner[dkey(a, b)] = id;
    edge_owner[dkey(b, c)] = id;
    edge_owner[dkey(c, a)] = id;
  }

  void remove(int id) {
    alive[id] = 0;
    const auto& t = tris[id];
    for (int i = 0; i < 3; ++i) {
      auto it = edge_owner.find(dkey(t[i], t[(i + 1) % 3]));
      if (it != edge_owner.end() && it->second == id) edge_owner.erase(it);
    }
  }

  bool conflict(int id, int v) const {
    const auto& t = tris[id];
    const Vec2& q = p[v];
    const double tol = 1e-12 * scale * scale;
    if (t[2] == kInf) {
      const double o = orient(p[t[0]], p[t[1]], q);
      if (o > tol) return true;
      if (o < -tol) return false;
      // On the hull line: conflict only strictly inside the segment.
      const Vec2 d = p[t[1]] - p[t[0]];
      const double s = (q - p[t[0]]).dot(d) / d.squaredNorm();
      return s > 0.0 && s < 1.0;
    }
    return incircle(p[t[0]], p[t[1]], p[t[2]], q) > tol * scale * scale;
  }

  void insert(int v) {
    int seed = -1;
    for (std::size_t i = 0; i < tris.size() && seed < 0; ++i)
      if (alive[i] && conflict(static_cast<int>(i), v)) seed = static_cast<int>(i);
    if (seed < 0) throw Error(ErrorKind::DegenerateInput, "point " + std::to_string(v) + " duplicates a vertex");
    // Connected conflict region grown from the seed.
    std::unordered_set<int> region{seed};
    std::deque<int> queue{seed};
    while (!queue.empty()) {
      const int id = queue.front();
      queue.pop_front();
      const auto& t = tris[id];
      for (int i = 0; i < 3; ++i) {
        auto it = edge_owner.find(dkey(t[(i + 1) % 3], t[i]));
        if (it == edge_owner.end()) continue;
        const int nb = it->second;
        if (region.count(nb) || !conflict(nb, v)) continue;
        region.insert(nb);
        queue.push_back(nb);
      }
    }
    std::vector<std::pair<int, int>> boundary;
    std::vector<int> ids(region.begin(), region.end());
    std::sort(ids.begin(), ids.end());
    for (int id : ids) {
      const auto& t = tris[id];
      for (int i = 0; i < 3; ++i) {
        const int a = t[i], b = t[(i + 1) % 3];
        auto it = edge_owner.find(dkey(b, a));
        if (it == edge_owner.end() || !region.count(it->second)) boundary.emplace_back(a, b);
      }
    }
    for (int id : ids) remove(id);
    for (const auto& [a, b] : boundary) add(a, b, v);
  }
};

}  // namespace

PlanarDelaunayResult planar_delaunay(std::span<const Vec2> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw Error(ErrorKind::DegenerateInput, "need at least three points");
  Vec2 lo = points[0], hi = points[0];
  for (const auto& q : points) {
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  Triangulator tr;
  tr.p = points;
  tr.scale = std::max((hi - lo).norm(), 1e-300);

  // First non-colinear triple.
  int i0 = 0, i1 = -1, i2 = -1;
  for (int i = 1; i < n && i1 < 0; ++i)
    if ((points[i] - points[i0]).norm() > 1e-12 * tr.scale) i1 = i;
  if (i1 < 0) throw Error(ErrorKind::DegenerateInput, "all points coincide");
  for (int i = 1; i < n && i2 < 0; ++i)
    if (i != i1 && std::abs(orient(points[i0], points[i1], points[i])) > 1e-12 * tr.scale * tr.scale) i2 = i;
  if (i2 < 0) throw Error(ErrorKind::DegenerateInput, "points are colinear");
  if (orient(points[i0], points[i1], points[i2]) < 0) std::swap(i1, i2);

  tr.add(i0, i1, i2);
  tr.add(i1, i0, kInf);
  tr.add(i2, i1, kInf);
  tr.add(i0, i2, kInf);
  for (int v = 0; v < n; ++v) {
    if (v == i0 || v == i1 || v == i2) continue;
    tr.insert(v);
  }

  PlanarDelaunayResult out;
  out.mesh.vertices.reserve(n);
  for (const auto& q : points) out.mesh.vertices.emplace_back(q.x(), q.y(), 0.0);
  for (std::size_t i = 0; i < tr.tris.size(); ++i) {
    if (!tr.alive[i] || tr.tris[i][2] == kInf) continue;
    out.mesh.triangles.push_back(tr.tris[i]);
  }
  std::sort(out.mesh.triangles.begin(), out.mesh.triangles.end());

  // Cocircular ties across interior edges.
  const double tol = 1e-9 * std::pow(tr.scale, 4);
  const EdgeAdjacency adj = mesh::build_adjacency(out.mesh);
  for (const Edge& e : adj.edges) {
    if (!e.interior()) continue;
    auto apex = [&](int t) {
      for (int v : out.mesh.triangles[t])
        if (v != e.v0 && v != e.v1) return v;
      return -1;
    };
    const auto& t = out.mesh.triangles[e.tri_k];
    const int d = apex(e.tri_l);
    if (std::abs(incircle(points[t[0]], points[t[1]], points[t[2]], points[d])) <= tol)
      out.cocircular.push_back({e.v0, e.v1, apex(e.tri_k), d});
  }
  return out;
}

}  // namespace dw::generators
