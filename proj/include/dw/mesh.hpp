#pragma once

// Geometry kernel: triangle meshes, edge adjacency, normals, circumcenters,
// dihedral angles, manifold checks and push-forward of flat meshes.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dw/error.hpp"

namespace dw {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Point3 = Vec3;

using TriangleIndices = std::array<int, 3>;

/// Ordered vertex triple. Orientation is counterclockwise seen from the
/// normal side.
struct Triangle {
  Point3 a, b, c;

  double area() const;
  double diameter() const;
  /// Smallest interior angle in radians.
  double min_angle() const;
};

struct IndexedMesh {
  std::vector<Point3> vertices;
  std::vector<TriangleIndices> triangles;

  Triangle triangle(std::size_t i) const {
    const auto& t = triangles[i];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }
  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }
};

/// Undirected edge with its one or two incident triangles; v0 < v1.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int tri_k = -1;
  int tri_l = -1;  // -1 on boundary edges

  bool interior() const { return tri_l >= 0; }
};

/// Edges in canonical (v0, v1) lexicographic order.
struct EdgeAdjacency {
  std::vector<Edge> edges;
  bool orientation_consistent = true;

  /// Index of the edge {a, b} or nullopt.
  std::optional<std::size_t> find(int a, int b) const;
  std::size_t num_interior() const;
  std::size_t num_boundary() const;
};

struct Circumdata {
  Point3 q;
  double r = 0.0;
};

struct DihedralData {
  double alpha = 0.0;        // angle between like-oriented normals, [0, pi]
  double normal_diff = 0.0;  // |n(K) - n(L)|
};

namespace mesh {

/// Relative area threshold below which a triangle counts as degenerate:
/// area < kDegenerateTolerance * diam^2.
inline constexpr double kDegenerateTolerance = 1e-12;

bool is_regular(const Triangle& t);

/// Unit normal by the right-hand rule on (a, b, c). Throws DegenerateTriangle.
Vec3 triangle_normal(const Triangle& t);

/// Circumcenter from the 3x3 system
///   (q - a).(b - a) = |b - a|^2 / 2,
///   (q - a).(c - a) = |c - a|^2 / 2,
///   (q - a).((c - a) x (b - a)) = 0.
/// Throws DegenerateTriangle when the system is singular.
Circumdata circumcenter(const Triangle& t);

/// Throws NonManifoldEdge when an edge has three or more incident triangles.
EdgeAdjacency build_adjacency(const IndexedMesh& mesh);

/// Dihedral data of an interior edge. Throws BoundaryEdge or NonOrientable.
DihedralData dihedral(const IndexedMesh& mesh, const EdgeAdjacency& adjacency, std::size_t edge);

/// Breadth-first reorientation so that every interior edge is traversed in
/// opposite directions by its two triangles. Each connected component keeps
/// the orientation of its lowest-index triangle. Throws NonOrientable.
IndexedMesh orient_consistently(const IndexedMesh& mesh);

/// Maximum triangle diameter.
double size(const IndexedMesh& mesh);

/// Lifts a flat mesh in the z = 0 plane: (x, y, 0) -> (x, y, h(x, y)).
IndexedMesh push_forward(const IndexedMesh& flat, const std::function<double(double, double)>& h);

/// Removes unreferenced vertices, keeping relative order.
IndexedMesh compact(const IndexedMesh& mesh);

IndexedMesh transformed(const IndexedMesh& mesh, const Eigen::Matrix3d& rotation,
                        const Vec3& translation, double scale = 1.0);

struct ManifoldViolation {
  enum class Kind { EdgeValence, VertexLink, Intersection, InvalidIndex, Degenerate };
  Kind kind;
  int first = -1;   // triangle, vertex or edge endpoint depending on kind
  int second = -1;
  std::string detail;
};

struct ManifoldVerdict {
  bool pass = true;
  std::vector<ManifoldViolation> violations;
};

/// Combinatorial test (edge valence <= 2, every vertex link a single path or
/// cycle) followed by a pairwise geometric test: two triangles may only meet
/// in nothing, one shared vertex, or one shared edge.
ManifoldVerdict check_manifold(const IndexedMesh& mesh);

}  // namespace mesh
}  // namespace dw
