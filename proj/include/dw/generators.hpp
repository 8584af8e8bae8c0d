#pragma once

// Mesh constructions: skewed grids over height fields, planar Delaunay,
// convex hulls of sphere points, icospheres, restricted Delaunay on analytic
// surfaces, protected point insertion and the non-Delaunay cylinder strip.

#include <array>
#include <span>
#include <vector>

#include "dw/mesh.hpp"
#include "dw/surfaces.hpp"

namespace dw {

struct ThetaGridSpec {
  ScalarField2D field;
  double eps = 0.125;
  double theta = 0.25;
  /// C in the admissibility window C * max|grad h|^2 < |theta| <= 1/2.
  double admissibility_constant = 4.0;
};

struct CounterexampleSpec {
  double s = 0.0;    // angular column width in units of eps
  double eps = 0.0;  // base length
  bool flat = false;  // leave the strip unwrapped in the (phi, t) plane

  /// s = 2 pi / m, eps = 2^-j.
  static CounterexampleSpec from_indices(int m, int j, bool flat = false);
};

struct PlanarDelaunayResult {
  IndexedMesh mesh;  // vertices (x, y, 0) in input order
  /// Interior edges whose two triangles have cocircular vertices within
  /// tolerance, as (v0, v1, apex_k, apex_l).
  std::vector<std::array<int, 4>> cocircular;
};

struct RestrictedDelaunayOptions {
  /// Required protection margin (absolute). Zero still demands a strictly
  /// positive margin.
  double protection = 0.0;
  /// Spacing of the surface sample used for the covering radius; zero picks
  /// a twentieth of the mean nearest-neighbour distance.
  double sample_spacing = 0.0;
};

struct AugmentResult {
  std::vector<Point3> points;
  double c = 0.0;  // constant actually used
  std::size_t inserted = 0;
  int retries = 0;
};

namespace generators {

/// Throws InadmissibleTheta unless the admissibility window holds.
void check_admissible(const ThetaGridSpec& spec);

/// Lattice eps (k + theta l, l) intersected with the domain, two triangles
/// per lattice cell split along the short diagonal, kept when all three
/// vertices lie in the domain. Flat version in the z = 0 plane.
/// Throws InadmissibleTheta, EmptyDomain.
IndexedMesh theta_grid_flat(const ThetaGridSpec& spec);
/// theta_grid_flat lifted by the field.
IndexedMesh theta_grid(const ThetaGridSpec& spec);

/// Bowyer-Watson with a symbolic vertex at infinity; triangulates the convex
/// hull. Throws DegenerateInput for colinear or repeated points.
PlanarDelaunayResult planar_delaunay(std::span<const Vec2> points);

/// Boundary of the convex hull, faces oriented outward. Incremental with a
/// fixed pseudo-random insertion order. Throws CoplanarQuadruple when four
/// points on the hull are coplanar within tolerance, DegenerateInput when
/// all points are coplanar.
IndexedMesh convex_hull(std::span<const Point3> points);

/// Convex hull of points on a sphere centred at the origin. Throws
/// HemisphereEmpty unless the origin lies strictly inside the hull (i.e.
/// every open hemisphere contains a point), CoplanarQuadruple.
IndexedMesh sphere_hull(std::span<const Point3> points);

IndexedMesh icosahedron();
/// Icosahedron with each triangle split into 4^level, projected to the
/// unit sphere; connectivity from the subdivision.
IndexedMesh subdivided_icosahedron(int level);
/// sphere_hull of the vertices of subdivided_icosahedron(level).
IndexedMesh icosphere(int level);

/// Triangles [x, y, z] whose Voronoi cells meet on the surface. For each
/// triple with circumradius below the covering bound, the line through the
/// circumcenter normal to the triangle is intersected with the surface and
/// the intersection is kept when no other point is strictly closer.
/// Throws InsufficientProtection, NonManifoldOutput.
IndexedMesh restricted_delaunay(std::span<const Point3> points, const AnalyticSurface& surface,
                                const RestrictedDelaunayOptions& options = {});

/// Greedy protected insertion on a surface sampled at eps / 20. Throws
/// EmptyCandidateSet when no sample passes the protection filter at this c,
/// InvalidArgument when the seed violates spacing eps/2 or protection
/// delta * eps / 2.
std::vector<Point3> augment_protected(std::span<const Point3> seed, const AnalyticSurface& surface, double eps,
                                      double delta, double c);
/// augment_protected, halving c on EmptyCandidateSet until c < min_c.
AugmentResult augment_protected_adaptive(std::span<const Point3> seed, const AnalyticSurface& surface, double eps,
                                         double delta, double c = 0.2, double min_c = 1e-4);

/// Isosceles strip on the unit cylinder: vertex lines at phi = k s eps,
/// alternate lines shifted by eps / 2 in t, bases of length eps on one line
/// and apex on the next. Throws NonIntegerColumns unless 2 pi / (s eps) is
/// an even integer.
IndexedMesh counterexample_cylinder(const CounterexampleSpec& spec);

}  // namespace generators
}  // namespace dw
