#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_map>

#include "dw/generators.hpp"

namespace dw::generators {
namespace {

double volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return (b - a).cross(c - a).dot(d - a);
}

std::uint64_t dkey(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

IndexedMesh convex_hull(std::span<const Point3> points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw Error(ErrorKind::DegenerateInput, "hull needs at least four points");
  Point3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = std::max((hi - lo).norm(), 1e-300);
  const double tol = 1e-13 * scale * scale * scale;

  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  for (int i = 1; i < n && i1 < 0; ++i)
    if ((points[i] - points[i0]).norm() > 1e-12 * scale) i1 = i;
  for (int i = 1; i < n && i1 >= 0 && i2 < 0; ++i)
    if ((points[i1] - points[i0]).cross(points[i] - points[i0]).norm() > 1e-12 * scale * scale) i2 = i;
  for (int i = 1; i < n && i2 >= 0 && i3 < 0; ++i)
    if (std::abs(volume(points[i0], points[i1], points[i2], points[i])) > 1e-9 * scale * scale * scale) i3 = i;
  if (i3 < 0) throw Error(ErrorKind::DegenerateInput, "points are coplanar");

  std::vector<std::array<int, 3>> faces;
  std::vector<char> alive;
  std::unordered_map<std::uint64_t, int> owner;
  auto add = [&](int a, int b, int c) {
    const int id = static_cast<int>(faces.size());
    faces.push_back({a, b, c});
    alive.push_back(1);
    owner[dkey(a, b)] = id;
    owner[dkey(b, c)] = id;
    owner[dkey(c, a)] = id;
  };
  const std::array<int, 4> tet{i0, i1, i2, i3};
  for (int f = 0; f < 4; ++f) {
    std::array<int, 3> t{};
    int w = -1, m = 0;
    for (int g = 0; g < 4; ++g) {
      if (g == f) {
        w = tet[g];
      } else {
        t[m++] = tet[g];
      }
    }
    if (volume(points[t[0]], points[t[1]], points[t[2]], points[w]) > 0) std::swap(t[1], t[2]);
    add(t[0], t[1], t[2]);
  }

  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  std::mt19937 rng(12345);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  std::vector<int> visible;
  for (int v : order) {
    visible.clear();
    const Point3& p = points[v];
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!alive[f]) continue;
      const auto& t = faces[f];
      const double vol = volume(points[t[0]], points[t[1]], points[t[2]], p);
      // Coplanar counts as hidden; ties that survive are caught below.
      if (vol > tol) visible.push_back(static_cast<int>(f));
    }
    if (visible.empty()) continue;  // interior point
    std::vector<char> is_visible(faces.size(), 0);
    for (int f : visible) is_visible[f] = 1;
    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) {
      const auto& t = faces[f];
      for (int i = 0; i < 3; ++i) {
        const int a = t[i], b = t[(i + 1) % 3];
        const auto it = owner.find(dkey(b, a));
        if (it == owner.end() || !is_visible[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (int f : visible) {
      alive[f] = 0;
      const auto& t = faces[f];
      for (int i = 0; i < 3; ++i) {
        auto it = owner.find(dkey(t[i], t[(i + 1) % 3]));
        if (it != owner.end() && it->second == f) owner.erase(it);
      }
    }
    for (const auto& [a, b] : horizon) add(a, b, v);
  }

  IndexedMesh out;
  out.vertices.assign(points.begin(), points.end());
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (alive[f]) out.triangles.push_back(faces[f]);
  std::sort(out.triangles.begin(), out.triangles.end());

  // Adjacent faces must not be coplanar.
  const EdgeAdjacency adj = mesh::build_adjacency(out);
  for (const Edge& e : adj.edges) {
    if (!e.interior()) continue;
    const auto& k = out.triangles[e.tri_k];
    int apex = -1;
    for (int x : out.triangles[e.tri_l])
      if (x != e.v0 && x != e.v1) apex = x;
    if (std::abs(volume(points[k[0]], points[k[1]], points[k[2]], points[apex])) <= tol)
      throw Error(ErrorKind::CoplanarQuadruple, "adjacent hull faces are coplanar");
  }
  return out;
}

IndexedMesh sphere_hull(std::span<const Point3> points) {
  if (points.size() < 4) throw Error(ErrorKind::HemisphereEmpty, "fewer than four points fit in a closed hemisphere");
  double mean = 0.0;
  for (const auto& p : points) mean += p.norm();
  mean /= static_cast<double>(points.size());
  for (const auto& p : points)
    if (std::abs(p.norm() - mean) > 1e-9 * mean)
      throw Error(ErrorKind::InvalidArgument, "points are not on a sphere centred at the origin");

  IndexedMesh hull;
  try {
    hull = convex_hull(points);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateInput) throw Error(ErrorKind::HemisphereEmpty, "points lie on a great circle");
    throw;
  }
  // Every open hemisphere holds a point iff the centre is interior to the hull.
  const double tol = 1e-13 * mean * mean * mean;
  for (std::size_t f = 0; f < hull.triangles.size(); ++f) {
    const Triangle t = hull.triangle(f);
    if (volume(t.a, t.b, t.c, Point3::Zero()) >= -tol)
      throw Error(ErrorKind::HemisphereEmpty, "some open hemisphere contains no point");
  }
  std::vector<char> used(points.size(), 0);
  for (const auto& t : hull.triangles)
    for (int v : t) used[v] = 1;
  if (std::find(used.begin(), used.end(), 0) != used.end())
    throw Error(ErrorKind::DegenerateInput, "repeated point on the sphere");
  return hull;
}

IndexedMesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point3> v;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      v.emplace_back(0.0, s1, s2 * phi);
      v.emplace_back(s1, s2 * phi, 0.0);
      v.emplace_back(s2 * phi, 0.0, s1);
    }
  for (auto& p : v) p.normalize();
  return convex_hull(v);
}

IndexedMesh subdivided_icosahedron(int level) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be nonnegative");
  IndexedMesh mesh = icosahedron();
  for (int l = 0; l < level; ++l) {
    std::unordered_map<std::uint64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::uint64_t k = a < b ? dkey(a, b) : dkey(b, a);
      auto it = midpoint.find(k);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      midpoint.emplace(k, id);
      return id;
    };
    std::vector<TriangleIndices> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  return mesh;
}

IndexedMesh icosphere(int level) { return sphere_hull(subdivided_icosahedron(level).vertices); }

}  // namespace dw::generators
