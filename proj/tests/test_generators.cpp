#include <doctest.h>

#include "dw/energy.hpp"
#include "dw/generators.hpp"
#include "dw/quality.hpp"
#include "oracles.hpp"

using namespace dw;

namespace {

bool outward_and_convex(const IndexedMesh& m, double tol) {
  for (const auto& t : m.triangles) {
    const Point3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
    const Vec3 n = (b - a).cross(c - a).normalized();
    for (const auto& p : m.vertices)
      if (n.dot(p - a) > tol) return false;
  }
  return true;
}

ThetaGridSpec grid_spec(ScalarField2D f, double eps, double theta) {
  ThetaGridSpec s;
  s.field = std::move(f);
  s.eps = eps;
  s.theta = theta;
  return s;
}

}  // namespace

TEST_CASE("planar Delaunay small cases") {
  const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK(generators::planar_delaunay(tri).mesh.triangles.size() == 1);

  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto sq = generators::planar_delaunay(square);
  CHECK(sq.mesh.triangles.size() == 2);
  CHECK(sq.cocircular.size() == 1);

  const std::vector<Vec2> with_centre{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  CHECK(generators::planar_delaunay(with_centre).mesh.triangles.size() == 4);

  const std::vector<Vec2> line{{0, 0}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS(generators::planar_delaunay(line), Error);
  const std::vector<Vec2> dup{{0, 0}, {1, 0}, {0, 1}, {1, 0}};
  CHECK_THROWS_AS(generators::planar_delaunay(dup), Error);
}

TEST_CASE("planar Delaunay matches the lifted lower hull") {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(rng.vec2());
    const auto got = generators::planar_delaunay(pts);
    CHECK(got.cocircular.empty());
    CHECK(oracle::sorted_triangles(got.mesh) == oracle::lifted_lower_hull(pts));
    for (const auto& t : got.mesh.triangles) {
      const Vec3 n = (got.mesh.vertices[t[1]] - got.mesh.vertices[t[0]]).cross(got.mesh.vertices[t[2]] - got.mesh.vertices[t[0]]);
      CHECK(n.z() > 0);
    }
  }
  // Integer lattice: every cell is a cocircular tie.
  std::vector<Vec2> lattice;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) lattice.emplace_back(i, j);
  const auto lat = generators::planar_delaunay(lattice);
  CHECK(lat.mesh.triangles.size() == 18);
  CHECK(lat.cocircular.size() == 9);
}

TEST_CASE("sphere hull") {
  const auto tet = oracle::tetrahedron();
  std::vector<Point3> tv;
  for (const auto& p : tet.vertices) tv.push_back(p.normalized());
  auto h = generators::sphere_hull(tv);
  CHECK(h.triangles.size() == 4);
  CHECK(outward_and_convex(h, 1e-12));

  const auto ico = generators::icosahedron();
  h = generators::sphere_hull(ico.vertices);
  CHECK(h.triangles.size() == 20);
  CHECK(oracle::sorted_triangles(h) == oracle::sorted_triangles(ico));

  oracle::Rng rng(5);
  std::vector<Point3> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(rng.unit());
  h = generators::sphere_hull(pts);
  CHECK(h.triangles.size() == 996);
  CHECK(outward_and_convex(h, 1e-12));
  CHECK(mesh::check_manifold(h).pass);
  CHECK(quality::quality_report(h).delaunay());

  std::vector<Point3> upper;
  for (int i = 0; i < 50; ++i) {
    Point3 p = rng.unit();
    p.z() = std::abs(p.z()) + 1e-3;
    upper.push_back(p.normalized());
  }
  CHECK_THROWS_WITH_AS(generators::sphere_hull(upper), doctest::Contains("HemisphereEmpty"), Error);

  std::vector<Point3> cube;
  for (int i = 0; i < 8; ++i)
    cube.push_back(Point3(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1) / std::sqrt(3.0));
  CHECK_THROWS_WITH_AS(generators::sphere_hull(cube), doctest::Contains("CoplanarQuadruple"), Error);
}

TEST_CASE("icospheres") {
  for (int k = 0; k <= 4; ++k) {
    const auto m = generators::icosphere(k);
    CHECK(m.triangles.size() == 20u * (1u << (2 * k)));
    CHECK(m.vertices.size() == 10u * (1u << (2 * k)) + 2);
    for (const auto& p : m.vertices) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mesh::check_manifold(m).pass);
    CHECK(outward_and_convex(m, 1e-12));
    CHECK(quality::quality_report(m).delaunay());
  }
}

TEST_CASE("theta grids") {
  const Rect U{0, 1, 0, 1};
  CHECK_THROWS_WITH_AS(generators::theta_grid(grid_spec(ScalarField2D::affine(0, 0, 0, U), 0.125, 0.0)),
                       doctest::Contains("InadmissibleTheta"), Error);
  CHECK_THROWS_WITH_AS(generators::theta_grid(grid_spec(ScalarField2D::affine(0, 0, 0, U), 0.125, 0.6)),
                       doctest::Contains("InadmissibleTheta"), Error);
  // Steep field: |theta| must exceed C |grad h|^2 = 4 * 0.09.
  CHECK_THROWS_AS(generators::check_admissible(grid_spec(ScalarField2D::affine(0.3, 0, 0, U), 0.125, 0.3)), Error);
  CHECK_NOTHROW(generators::check_admissible(grid_spec(ScalarField2D::affine(0.3, 0, 0, U), 0.125, 0.4)));
  CHECK_THROWS_WITH_AS(generators::theta_grid(grid_spec(ScalarField2D::affine(0, 0, 0, Rect{0, 0.01, 0, 0.01}), 0.125, 0.25)),
                       doctest::Contains("EmptyDomain"), Error);

  const auto f = ScalarField2D::quadratic(0.05, 0.0, -0.05, U);
  for (double theta : {0.4, -0.25, 0.1}) {
    for (double eps : {1.0 / 8, 1.0 / 16}) {
      const auto spec = grid_spec(f, eps, theta);
      const auto flat = generators::theta_grid_flat(spec);
      const auto m = generators::theta_grid(spec);
      CHECK(m.triangles == flat.triangles);
      CHECK(mesh::check_manifold(m).pass);
      for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        const Point3& p = m.vertices[i];
        CHECK(flat.vertices[i].z() == 0.0);
        CHECK(U.contains(p.x(), p.y(), 1e-12));
        CHECK(p.z() == doctest::Approx(f(p.x(), p.y())).epsilon(1e-14));
        // Lattice membership: y / eps and x / eps - theta y / eps integers.
        const double l = p.y() / eps, k = p.x() / eps - theta * l;
        CHECK(std::abs(l - std::round(l)) < 1e-9);
        CHECK(std::abs(k - std::round(k)) < 1e-9);
      }
      // Flat triangles have area eps^2 / 2 and positive orientation.
      for (std::size_t t = 0; t < flat.triangles.size(); ++t) {
        const Triangle tr = flat.triangle(t);
        const double cross = (tr.b - tr.a).x() * (tr.c - tr.a).y() - (tr.b - tr.a).y() * (tr.c - tr.a).x();
        CHECK(cross == doctest::Approx(eps * eps).epsilon(1e-9));
      }
      CHECK(energy::bending_energy(flat).total == 0.0);
    }
  }
}

TEST_CASE("restricted Delaunay on the sphere") {
  const auto sphere = AnalyticSurface::sphere(1.0);
  const std::vector<Point3> octa{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const auto oct = generators::restricted_delaunay(octa, sphere);
  CHECK(oct.triangles.size() == 8);
  CHECK(oracle::sorted_triangles(oct) == oracle::sorted_triangles(generators::sphere_hull(octa)));

  // The square faces of a cube are cocircular: no protection.
  std::vector<Point3> cube;
  for (int i = 0; i < 8; ++i)
    cube.push_back(Point3(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1) / std::sqrt(3.0));
  CHECK_THROWS_WITH_AS(generators::restricted_delaunay(cube, sphere), doctest::Contains("InsufficientProtection"), Error);

  oracle::Rng rng(9);
  std::vector<Point3> pts;
  for (int i = 0; i < 120; ++i) pts.push_back(rng.unit());
  const auto rd = generators::restricted_delaunay(pts, sphere);
  CHECK(oracle::sorted_triangles(rd) == oracle::sorted_triangles(generators::sphere_hull(pts)));
  CHECK(mesh::check_manifold(rd).pass);
}

TEST_CASE("protected augmentation") {
  const auto sphere = AnalyticSurface::sphere(1.0);
  const double eps = 0.3, delta = 0.5;
  const auto res = generators::augment_protected_adaptive({}, sphere, eps, delta);
  CHECK(res.points.size() == res.inserted);
  CHECK(res.c > 0);
  CHECK(quality::min_spacing(res.points) >= 0.5 * eps * (1 - 1e-12));
  const auto cover = quality::covering_radius(res.points, sphere, eps / 40);
  CHECK(cover.lower <= eps);
  CHECK(quality::protection_margin(res.points, 2 * eps) >= res.c * eps * (1 - 1e-9));

  // A seed that already covers is returned unchanged.
  const double small_delta = 2 * quality::protection_margin(res.points, eps) / eps * 0.99;
  const auto again = generators::augment_protected(res.points, sphere, eps, small_delta, res.c);
  CHECK(again.size() == res.points.size());

  const std::vector<Point3> crowded{{0, 0, 1}, {0, 0.01, std::sqrt(1 - 1e-4)}};
  CHECK_THROWS_WITH_AS(generators::augment_protected(crowded, sphere, eps, delta, 0.2), doctest::Contains("InvalidArgument"),
                       Error);
}

TEST_CASE("non-Delaunay cylinder strip") {
  const auto spec = CounterexampleSpec::from_indices(8, 5);
  CHECK(spec.s == doctest::Approx(2 * std::numbers::pi / 8));
  CHECK(spec.eps == 1.0 / 32);
  const auto m = generators::counterexample_cylinder(spec);
  for (const auto& p : m.vertices) {
    CHECK(std::hypot(p.x(), p.y()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.z()) <= 1.0 + 1e-14);
  }
  CHECK(mesh::check_manifold(m).pass);

  const auto flat = generators::counterexample_cylinder(CounterexampleSpec::from_indices(8, 5, true));
  CHECK(energy::bending_energy(flat).total == 0.0);

  CounterexampleSpec bad;
  bad.s = 0.3;
  bad.eps = 1.0 / 32;
  CHECK_THROWS_WITH_AS(generators::counterexample_cylinder(bad), doctest::Contains("NonIntegerColumns"), Error);

  // Energy is stable under refinement in eps at fixed s.
  const double e5 = energy::bending_energy(m).total;
  const double e6 = energy::bending_energy(generators::counterexample_cylinder(CounterexampleSpec::from_indices(8, 6))).total;
  CHECK(std::abs(e6 - e5) <= 0.2 * e5);
}
