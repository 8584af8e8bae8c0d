#include "dw/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

namespace dw {

double Triangle::area() const { return 0.5 * (b - a).cross(c - a).norm(); }

double Triangle::diameter() const {
  return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

double Triangle::min_angle() const {
  auto angle = [](const Vec3& apex, const Vec3& p, const Vec3& q) {
    const Vec3 u = p - apex;
    const Vec3 w = q - apex;
    return std::atan2(u.cross(w).norm(), u.dot(w));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

std::optional<std::size_t> EdgeAdjacency::find(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b),
                             [](const Edge& e, const std::pair<int, int>& key) {
                               return std::make_pair(e.v0, e.v1) < key;
                             });
  if (it == edges.end() || it->v0 != a || it->v1 != b) return std::nullopt;
  return static_cast<std::size_t>(it - edges.begin());
}

std::size_t EdgeAdjacency::num_interior() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.interior(); }));
}

std::size_t EdgeAdjacency::num_boundary() const { return edges.size() - num_interior(); }

namespace mesh {

bool is_regular(const Triangle& t) {
  const double diam = t.diameter();
  return diam > 0.0 && t.area() >= kDegenerateTolerance * diam * diam;
}

Vec3 triangle_normal(const Triangle& t) {
  if (!is_regular(t)) throw Error(ErrorKind::DegenerateTriangle, "triangle area below tolerance");
  return (t.b - t.a).cross(t.c - t.a).normalized();
}

Circumdata circumcenter(const Triangle& t) {
  if (!is_regular(t)) throw Error(ErrorKind::DegenerateTriangle, "circumcenter of degenerate triangle");
  const Vec3 u = t.b - t.a;
  const Vec3 w = t.c - t.a;
  Eigen::Matrix3d system;
  system.row(0) = u.transpose();
  system.row(1) = w.transpose();
  system.row(2) = w.cross(u).transpose();
  const Vec3 rhs(0.5 * u.squaredNorm(), 0.5 * w.squaredNorm(), 0.0);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(system);
  if (!lu.isInvertible()) throw Error(ErrorKind::DegenerateTriangle, "singular circumcenter system");
  const Vec3 offset = lu.solve(rhs);
  Circumdata out;
  out.q = t.a + offset;
  // Average of the three vertex distances; equal up to rounding.
  out.r = ((out.q - t.a).norm() + (out.q - t.b).norm() + (out.q - t.c).norm()) / 3.0;
  return out;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Direction in which triangle t traverses the edge (a, b) with a < b.
bool traverses_forward(const TriangleIndices& t, int a, int b) {
  for (int i = 0; i < 3; ++i) {
    if (t[i] == a && t[(i + 1) % 3] == b) return true;
  }
  return false;
}

}  // namespace

EdgeAdjacency build_adjacency(const IndexedMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<std::pair<std::uint64_t, int>> half_edges;
  half_edges.reserve(mesh.triangles.size() * 3);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      int a = tri[i];
      int b = tri[(i + 1) % 3];
      if (a < 0 || b < 0 || a >= nv || b >= nv) {
        throw Error(ErrorKind::InvalidArgument, "triangle " + std::to_string(t) + " has invalid index");
      }
      if (a > b) std::swap(a, b);
      half_edges.emplace_back(edge_key(a, b), static_cast<int>(t));
    }
  }
  std::sort(half_edges.begin(), half_edges.end());

  EdgeAdjacency adjacency;
  adjacency.edges.reserve(half_edges.size() / 2 + 1);
  for (std::size_t i = 0; i < half_edges.size();) {
    std::size_t j = i;
    while (j < half_edges.size() && half_edges[j].first == half_edges[i].first) ++j;
    const int a = static_cast<int>(half_edges[i].first >> 32);
    const int b = static_cast<int>(half_edges[i].first & 0xffffffffu);
    if (j - i > 2) {
      throw Error(ErrorKind::NonManifoldEdge, "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                                  ") has " + std::to_string(j - i) + " triangles");
    }
    Edge e;
    e.v0 = a;
    e.v1 = b;
    e.tri_k = half_edges[i].second;
    if (j - i == 2) {
      e.tri_l = half_edges[i + 1].second;
      if (e.tri_k == e.tri_l) {
        throw Error(ErrorKind::NonManifoldEdge, "triangle repeats a vertex");
      }
      const bool fk = traverses_forward(mesh.triangles[e.tri_k], a, b);
      const bool fl = traverses_forward(mesh.triangles[e.tri_l], a, b);
      if (fk == fl) adjacency.orientation_consistent = false;
    }
    adjacency.edges.push_back(e);
    i = j;
  }
  return adjacency;
}

DihedralData dihedral(const IndexedMesh& mesh, const EdgeAdjacency& adjacency, std::size_t edge) {
  const Edge& e = adjacency.edges.at(edge);
  if (!e.interior()) throw Error(ErrorKind::BoundaryEdge, "edge " + std::to_string(edge) + " is on the boundary");
  if (!adjacency.orientation_consistent) throw Error(ErrorKind::NonOrientable, "normals are not like-oriented");
  const Vec3 nk = triangle_normal(mesh.triangle(e.tri_k));
  const Vec3 nl = triangle_normal(mesh.triangle(e.tri_l));
  DihedralData out;
  out.normal_diff = (nk - nl).norm();
  out.alpha = 2.0 * std::atan2(out.normal_diff, (nk + nl).norm());
  return out;
}

IndexedMesh orient_consistently(const IndexedMesh& mesh) {
  const EdgeAdjacency adjacency = build_adjacency(mesh);
  const std::size_t nt = mesh.triangles.size();
  std::vector<std::vector<std::size_t>> tri_edges(nt);
  for (std::size_t i = 0; i < adjacency.edges.size(); ++i) {
    const Edge& e = adjacency.edges[i];
    if (!e.interior()) continue;
    tri_edges[e.tri_k].push_back(i);
    tri_edges[e.tri_l].push_back(i);
  }

  IndexedMesh out = mesh;
  std::vector<int> state(nt, -1);  // -1 unvisited, 0 kept, 1 flipped
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < nt; ++seed) {
    if (state[seed] >= 0) continue;
    state[seed] = 0;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t t = queue.front();
      queue.pop_front();
      for (std::size_t ei : tri_edges[t]) {
        const Edge& e = adjacency.edges[ei];
        const std::size_t other = static_cast<std::size_t>(e.tri_k) == t ? e.tri_l : e.tri_k;
        const bool ft = traverses_forward(out.triangles[t], e.v0, e.v1);
        const bool fo_original = traverses_forward(mesh.triangles[other], e.v0, e.v1);
        if (state[other] < 0) {
          const bool flip = (fo_original == ft);
          state[other] = flip ? 1 : 0;
          if (flip) std::swap(out.triangles[other][1], out.triangles[other][2]);
          queue.push_back(other);
        } else {
          const bool fo = traverses_forward(out.triangles[other], e.v0, e.v1);
          if (fo == ft) {
            throw Error(ErrorKind::NonOrientable,
                        "orientation conflict across edge (" + std::to_string(e.v0) + ", " + std::to_string(e.v1) + ")");
          }
        }
      }
    }
  }
  return out;
}

double size(const IndexedMesh& mesh) {
  double s = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) s = std::max(s, mesh.triangle(i).diameter());
  return s;
}

IndexedMesh push_forward(const IndexedMesh& flat, const std::function<double(double, double)>& h) {
  IndexedMesh out = flat;
  for (auto& v : out.vertices) v.z() = h(v.x(), v.y());
  return out;
}

IndexedMesh compact(const IndexedMesh& mesh) {
  std::vector<int> remap(mesh.vertices.size(), -1);
  for (const auto& t : mesh.triangles)
    for (int v : t) remap[v] = 0;
  IndexedMesh out;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (remap[i] < 0) continue;
    remap[i] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[i]);
  }
  out.triangles.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) out.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return out;
}

IndexedMesh transformed(const IndexedMesh& mesh, const Eigen::Matrix3d& rotation, const Vec3& translation,
                        double scale) {
  IndexedMesh out = mesh;
  for (auto& v : out.vertices) v = scale * (rotation * v) + translation;
  return out;
}

}  // namespace mesh
}  // namespace dw
