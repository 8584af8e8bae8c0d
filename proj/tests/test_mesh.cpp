#include <doctest.h>

#include "dw/generators.hpp"
#include "dw/mesh.hpp"
#include "oracles.hpp"

using namespace dw;

namespace {

Triangle tri(Point3 a, Point3 b, Point3 c) { return {a, b, c}; }

// Two triangles sharing the edge (0,1), the second folded by `angle` about
// the x-axis. Consistent winding.
IndexedMesh folded_pair(double angle) {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.5, -std::cos(angle), std::sin(angle)}};
  m.triangles = {{0, 1, 2}, {1, 0, 3}};
  return m;
}

}  // namespace

TEST_CASE("build_adjacency on small meshes") {
  IndexedMesh single;
  single.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  single.triangles = {{0, 1, 2}};
  const auto a1 = mesh::build_adjacency(single);
  CHECK(a1.num_boundary() == 3);
  CHECK(a1.num_interior() == 0);

  const auto tet = oracle::tetrahedron();
  const auto a2 = mesh::build_adjacency(tet);
  CHECK(a2.num_interior() == 6);
  CHECK(a2.num_boundary() == 0);
  CHECK(a2.orientation_consistent);
  for (std::size_t f = 0; f < tet.triangles.size(); ++f) {
    const Vec3 n = mesh::triangle_normal(tet.triangle(f));
    CHECK(n.dot(tet.triangle(f).a) > 0);  // centroid at the origin: outward
  }

  IndexedMesh book;
  book.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
  book.triangles = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
  CHECK_THROWS_WITH_AS(mesh::build_adjacency(book), doctest::Contains("NonManifoldEdge"), Error);
}

TEST_CASE("edges come in canonical order and find works") {
  const auto adj = mesh::build_adjacency(oracle::tetrahedron());
  for (std::size_t i = 0; i + 1 < adj.edges.size(); ++i) {
    const auto& e = adj.edges[i];
    const auto& f = adj.edges[i + 1];
    CHECK(e.v0 < e.v1);
    CHECK(std::make_pair(e.v0, e.v1) < std::make_pair(f.v0, f.v1));
  }
  CHECK(adj.find(2, 0).has_value());
  CHECK(*adj.find(0, 2) == *adj.find(2, 0));
  CHECK_FALSE(adj.find(0, 0).has_value());
}

TEST_CASE("check_manifold verdicts") {
  CHECK(mesh::check_manifold(oracle::tetrahedron()).pass);

  IndexedMesh crossing;
  crossing.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.2, 0.2, -0.5}, {0.3, 0.3, 0.5}, {0.9, -0.5, 0.0}};
  crossing.triangles = {{0, 1, 2}, {3, 4, 5}};
  const auto v = mesh::check_manifold(crossing);
  CHECK_FALSE(v.pass);
  REQUIRE_FALSE(v.violations.empty());
  CHECK(v.violations.front().kind == mesh::ManifoldViolation::Kind::Intersection);
  CHECK(((v.violations.front().first == 0 && v.violations.front().second == 1) ||
         (v.violations.front().first == 1 && v.violations.front().second == 0)));

  // Two fans glued at one vertex: the link of that vertex is two cycles.
  IndexedMesh bowtie;
  bowtie.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {-1, 0, 0}, {-1, -1, 0}};
  bowtie.triangles = {{0, 1, 2}, {0, 3, 4}};
  const auto b = mesh::check_manifold(bowtie);
  CHECK_FALSE(b.pass);

  // Coplanar overlap sharing an edge: fold of 180 degrees.
  IndexedMesh folded;
  folded.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.6, 0.8, 0}};
  folded.triangles = {{0, 1, 2}, {1, 0, 3}};
  CHECK_FALSE(mesh::check_manifold(folded).pass);

  ThetaGridSpec spec;
  spec.field = ScalarField2D::quadratic(0.05, 0.0, -0.05, Rect{0, 1, 0, 1});
  spec.eps = 0.125;
  spec.theta = 0.1;
  CHECK(mesh::check_manifold(generators::theta_grid(spec)).pass);
}

TEST_CASE("triangle_normal") {
  CHECK(mesh::triangle_normal(tri({0, 0, 0}, {1, 0, 0}, {0, 1, 0})).isApprox(Vec3(0, 0, 1)));
  CHECK(mesh::triangle_normal(tri({0, 0, 0}, {0, 1, 0}, {1, 0, 0})).isApprox(Vec3(0, 0, -1)));
  CHECK_THROWS_WITH_AS(mesh::triangle_normal(tri({0, 0, 0}, {1, 0, 0}, {2, 0, 0})),
                       doctest::Contains("DegenerateTriangle"), Error);
}

TEST_CASE("circumcenter closed forms") {
  const auto c = mesh::circumcenter(tri({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
  CHECK((c.q - Point3(0.5, 0.5, 0)).norm() < 1e-15);
  CHECK(c.r == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));

  oracle::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix3d R = rng.rotation();
    const Vec3 t = rng.vec3(-5, 5);
    const Point3 a = R * Point3(0, 0, 0) + t, b = R * Point3(1, 0, 0) + t,
                 cc = R * Point3(0.5, std::sqrt(3.0) / 2, 0) + t;
    const auto e = mesh::circumcenter(tri(a, b, cc));
    CHECK(e.r == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK((e.q - (a + b + cc) / 3).norm() < 1e-12);
  }
  CHECK_THROWS_AS(mesh::circumcenter(tri({0, 0, 0}, {1, 1, 1}, {2, 2, 2})), Error);
}

TEST_CASE("circumcenter residuals, homogeneity and rigid-motion equivariance") {
  oracle::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto p = oracle::random_triangle(rng, 0.02);
    const Triangle t = tri(p[0], p[1], p[2]);
    const auto c = mesh::circumcenter(t);
    const double dev = std::max({std::abs((c.q - t.a).norm() - c.r), std::abs((c.q - t.b).norm() - c.r),
                                 std::abs((c.q - t.c).norm() - c.r)});
    CHECK(dev < 1e-9 * (1 + c.r));
    CHECK(std::abs((c.q - t.a).dot(mesh::triangle_normal(t))) < 1e-9 * (1 + c.r));

    const double lambda = rng.uniform(0.01, 100);
    const auto cs = mesh::circumcenter(tri(lambda * t.a, lambda * t.b, lambda * t.c));
    CHECK((cs.q - lambda * c.q).norm() < 1e-9 * lambda * (1 + c.r));
    CHECK(cs.r == doctest::Approx(lambda * c.r).epsilon(1e-9));

    const Eigen::Matrix3d R = rng.rotation();
    const Vec3 v = rng.vec3(-10, 10);
    const auto cm = mesh::circumcenter(tri(R * t.a + v, R * t.b + v, R * t.c + v));
    CHECK((cm.q - (R * c.q + v)).norm() < 1e-9 * (1 + c.r + v.norm()));
    CHECK(cm.r == doctest::Approx(c.r).epsilon(1e-9));
  }
}

TEST_CASE("circumcenter matches the grid-search oracles") {
  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto p = oracle::random_triangle(rng, 0.1);
    const auto c = mesh::circumcenter(tri(p[0], p[1], p[2]));
    const double span = std::max({(p[0] - p[1]).norm(), (p[1] - p[2]).norm(), (p[0] - p[2]).norm()});
    CHECK((oracle::equidistant_point(p[0], p[1], p[2], 8 * span) - c.q).norm() < 1e-6);
  }
  // Acute triangles: the smallest enclosing circle is the circumcircle.
  // Near right angles the objective is flat, so keep a margin.
  for (int found = 0; found < 50;) {
    const auto p = oracle::random_triangle(rng, 0.3);
    if (oracle::max_angle(p) > 80 * std::numbers::pi / 180) continue;
    ++found;
    const auto c = mesh::circumcenter(tri(p[0], p[1], p[2]));
    CHECK((oracle::min_max_distance_point(p[0], p[1], p[2], 2.0) - c.q).norm() < 1e-6);
  }
}

TEST_CASE("distance bound between adjacent circumcenters") {
  oracle::Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Point3 x = rng.vec3(), y = rng.vec3(), z = rng.vec3(), p = rng.vec3();
    const Triangle k = tri(x, y, z), l = tri(x, y, p);
    if (!mesh::is_regular(k) || !mesh::is_regular(l)) continue;
    const auto ck = mesh::circumcenter(k), cl = mesh::circumcenter(l);
    const double d = (ck.q - cl.q).norm();
    CHECK(d >= 0.5 * std::abs((ck.q - p).norm() - ck.r) - 1e-9 * (1 + ck.r));
  }
}

TEST_CASE("dihedral values") {
  SUBCASE("coplanar") {
    const auto m = folded_pair(0.0);
    const auto adj = mesh::build_adjacency(m);
    const auto d = mesh::dihedral(m, adj, *adj.find(0, 1));
    CHECK(d.alpha == doctest::Approx(0).epsilon(1e-12));
    CHECK(d.normal_diff < 1e-12);
  }
  SUBCASE("tetrahedron faces") {
    const auto m = oracle::tetrahedron();
    const auto adj = mesh::build_adjacency(m);
    for (std::size_t e = 0; e < adj.edges.size(); ++e) {
      const auto d = mesh::dihedral(m, adj, e);
      CHECK(d.normal_diff * d.normal_diff == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
      CHECK(d.alpha == doctest::Approx(std::numbers::pi - std::acos(1.0 / 3.0)).epsilon(1e-12));
    }
  }
  SUBCASE("square folded along its diagonal") {
    IndexedMesh m;
    m.vertices = {{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 2, 1}, {0, 1, 3}};
    // Rotate vertex 3 by 90 degrees about the diagonal.
    const Vec3 axis = Vec3(1, 1, 0).normalized();
    const Eigen::Matrix3d R = Eigen::AngleAxisd(std::numbers::pi / 2, axis).toRotationMatrix();
    m.vertices[3] = R * m.vertices[3];
    const auto adj = mesh::build_adjacency(m);
    const auto d = mesh::dihedral(m, adj, *adj.find(0, 1));
    CHECK(d.alpha == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(d.normal_diff == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("boundary edge") {
    const auto m = folded_pair(0.3);
    const auto adj = mesh::build_adjacency(m);
    CHECK_THROWS_WITH_AS(mesh::dihedral(m, adj, *adj.find(0, 2)), doctest::Contains("BoundaryEdge"), Error);
  }
  SUBCASE("identity |n(K) - n(L)| = 2 sin(alpha / 2) on random folds") {
    oracle::Rng rng(23);
    for (int i = 0; i < 200; ++i) {
      const auto m = folded_pair(rng.uniform(0, std::numbers::pi - 0.01));
      const auto adj = mesh::build_adjacency(m);
      const auto d = mesh::dihedral(m, adj, *adj.find(0, 1));
      CHECK(std::abs(d.normal_diff - 2 * std::sin(d.alpha / 2)) < 1e-12);
    }
  }
}

TEST_CASE("orient_consistently repairs flipped faces and rejects a Moebius strip") {
  auto m = oracle::tetrahedron();
  std::swap(m.triangles[2][1], m.triangles[2][2]);
  CHECK_FALSE(mesh::build_adjacency(m).orientation_consistent);
  const auto fixed = mesh::orient_consistently(m);
  CHECK(mesh::build_adjacency(fixed).orientation_consistent);
  CHECK(fixed.triangles[0] == m.triangles[0]);

  IndexedMesh mobius;
  const int n = 6;
  for (int i = 0; i < n; ++i) {
    const double phi = 2 * std::numbers::pi * i / n;
    const double tw = phi / 2;
    const Vec3 c(std::cos(phi), std::sin(phi), 0);
    const Vec3 w = std::cos(tw) * c + std::sin(tw) * Vec3(0, 0, 1);
    mobius.vertices.push_back(c + 0.3 * w);
    mobius.vertices.push_back(c - 0.3 * w);
  }
  for (int i = 0; i < n; ++i) {
    const int a = 2 * i, b = 2 * i + 1;
    int c = 2 * ((i + 1) % n), d = c + 1;
    if (i == n - 1) std::swap(c, d);  // the half twist
    mobius.triangles.push_back({a, b, c});
    mobius.triangles.push_back({b, d, c});
  }
  CHECK_THROWS_WITH_AS(mesh::orient_consistently(mobius), doctest::Contains("NonOrientable"), Error);
}

TEST_CASE("push_forward") {
  ThetaGridSpec spec;
  spec.field = ScalarField2D::affine(0, 0, 0, Rect{0, 1, 0, 1});
  spec.eps = 0.25;
  spec.theta = 0.25;
  const auto flat = generators::theta_grid_flat(spec);

  const auto same = mesh::push_forward(flat, [](double, double) { return 0.0; });
  CHECK(same.triangles == flat.triangles);
  for (std::size_t i = 0; i < flat.vertices.size(); ++i) CHECK(same.vertices[i] == flat.vertices[i]);

  const auto affine = mesh::push_forward(flat, [](double x, double y) { return 0.3 * x - 0.7 * y + 2; });
  const Vec3 n0 = mesh::triangle_normal(affine.triangle(0));
  for (std::size_t f = 0; f < affine.triangles.size(); ++f)
    CHECK((mesh::triangle_normal(affine.triangle(f)) - n0).norm() < 1e-12);

  const auto para = mesh::push_forward(flat, [](double x, double) { return x * x; });
  for (std::size_t i = 0; i < flat.vertices.size(); ++i) {
    const Point3& p = para.vertices[i];
    CHECK(p.z() == p.x() * p.x());
  }
  for (std::size_t f = 0; f < para.triangles.size(); ++f) {
    const Triangle t = para.triangle(f);
    const Vec3 direct = (t.b - t.a).cross(t.c - t.a).normalized();
    CHECK((mesh::triangle_normal(t) - direct).norm() < 1e-14);
    CHECK(direct.z() > 0);
  }
}

TEST_CASE("size and compact") {
  const auto tet = oracle::tetrahedron();
  CHECK(mesh::size(tet) == doctest::Approx(1.0).epsilon(1e-12));
  IndexedMesh m = tet;
  m.vertices.insert(m.vertices.begin(), Point3(9, 9, 9));
  for (auto& t : m.triangles)
    for (int& v : t) ++v;
  const auto c = mesh::compact(m);
  CHECK(c.vertices.size() == 4);
  CHECK(c.triangles == tet.triangles);
}
