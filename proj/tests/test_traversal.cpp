#include <doctest.h>

#include "dw/generators.hpp"
#include "dw/traversal.hpp"
#include "oracles.hpp"

using namespace dw;

namespace {

// n x n unit squares on [0, n]^2, each split along (i, j) -> (i + 1, j + 1).
IndexedMesh square_grid(int n) {
  IndexedMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(i, j, 0);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

IndexedMesh skew_grid(double eps) {
  ThetaGridSpec s;
  s.field = ScalarField2D::affine(0, 0, 0, Rect{0, 1, 0, 1});
  s.eps = eps;
  s.theta = 0.25;
  return generators::theta_grid_flat(s);
}

Vec2 centroid(const IndexedMesh& m, int t) {
  const auto& f = m.triangles[t];
  return ((m.vertices[f[0]] + m.vertices[f[1]] + m.vertices[f[2]]) / 3.0).head<2>();
}

}  // namespace

TEST_CASE("segment inside one triangle") {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  const auto seq = traversal::cross(m, Vec2(0.1, 0.1), Vec2(0.2, 0.1));
  CHECK(seq.triangles == std::vector<int>{0});
  CHECK(seq.crossings.empty());
  CHECK_FALSE(seq.perturbed);
  CHECK_THROWS_WITH_AS(traversal::cross(m, Vec2(0.1, 0.1), Vec2(1.0, 0.0)), doctest::Contains("SegmentExitsMesh"), Error);
}

TEST_CASE("crossings of a horizontal segment through a square grid") {
  const FlatMeshIndex index(square_grid(10));
  const auto seq = traversal::cross(index, Vec2(0.5, 3.3), Vec2(9.0, 0.0));
  REQUIRE(seq.crossings.size() == 18);
  CHECK(seq.triangles.size() == 19);
  int vertical = 0, diagonal = 0;
  double last_t = 0;
  for (std::size_t i = 0; i < seq.crossings.size(); ++i) {
    const auto& c = seq.crossings[i];
    CHECK(c.t > last_t);
    last_t = c.t;
    CHECK(c.from == seq.triangles[i]);
    CHECK(c.to == seq.triangles[i + 1]);
    CHECK(c.nu.dot(Vec2(1, 0)) > 0);
    if (std::abs(c.theta - 1.0) < 1e-12) {
      ++vertical;
      CHECK(c.l == doctest::Approx(1.0));
    } else {
      ++diagonal;
      CHECK(c.theta == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
      CHECK(c.l == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
  }
  CHECK(vertical == 9);
  CHECK(diagonal == 9);
}

TEST_CASE("segments through vertices are perturbed") {
  const FlatMeshIndex index(square_grid(6));
  const auto seq = traversal::cross(index, Vec2(0.5, 0.5), Vec2(4.0, 4.0));
  CHECK(seq.perturbed);
  CHECK(traversal::telescoping_residual(index, seq) < 1e-9);
  const auto from_vertex = traversal::cross(index, Vec2(1.0, 1.0), Vec2(2.0, 0.5));
  CHECK(from_vertex.perturbed);
}

TEST_CASE("telescoping on a skew grid") {
  const FlatMeshIndex index(skew_grid(1.0 / 50));
  oracle::Rng rng(91);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec2 x = rng.vec2(0.15, 0.85);
    const Vec2 v = rng.vec2(-0.1, 0.1);
    const auto seq = traversal::cross(index, x, v);
    worst = std::max(worst, traversal::telescoping_residual(index, seq));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("indicator area") {
  oracle::Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    const Vec2 a = rng.vec2(), b = rng.vec2();
    Vec2 v = rng.vec2();
    v *= rng.uniform(0.05, 0.5) / v.norm();
    const Vec2 nu = Vec2(b.y() - a.y(), a.x() - b.x()).normalized();
    const double expected = v.norm() * (b - a).norm() * std::abs(nu.dot(v.normalized()));
    CHECK(traversal::indicator_area(a, b, v) == doctest::Approx(expected).epsilon(1e-12));
    const double mc = traversal::indicator_area_mc(a, b, v, 200, [&] { return rng.uniform(); });
    CHECK(mc == doctest::Approx(expected).epsilon(0.01));
    const Vec2 w = rng.vec2();
    const Vec2 apex = 0.5 * (a + b) + 0.3 * (a - b).norm() * (a.dot(nu) < 0 ? nu : Vec2(-nu));
    CHECK(traversal::lifted_indicator_area(a, b, apex, v, w) == doctest::Approx(expected).epsilon(1e-9));
  }
  // Endpoint contact counts.
  CHECK(traversal::indicator(Vec2(0, 0), Vec2(0, 1), Vec2(-1, 0.5), Vec2(1, 0)));
  CHECK_FALSE(traversal::indicator(Vec2(0, 0), Vec2(0, 1), Vec2(-1, 0.5), Vec2(0.99, 0)));
  CHECK(traversal::indicator(Vec2(0, 0), Vec2(0, 1), Vec2(-0.5, 1.0), Vec2(1, 0)));
}

TEST_CASE("difference-quotient bound") {
  const FlatMeshIndex index(skew_grid(0.1));
  const auto& m = index.mesh();
  const std::vector<double> heights(m.vertices.size(), 0.0);
  const Rect W{0.3, 0.6, 0.3, 0.6};

  std::vector<double> g(m.triangles.size(), 2.5);
  auto b = traversal::cs_bound_check(index, heights, g, Vec2(0.04, 0.03), W, 16);
  CHECK(b.lhs == doctest::Approx(0.0));
  CHECK(b.dual_sum == doctest::Approx(0.0));

  // Step across the lattice line y = 0.5: lhs is the swept band.
  for (std::size_t t = 0; t < m.triangles.size(); ++t) g[t] = centroid(m, static_cast<int>(t)).y() < 0.5 ? 1.0 : 0.0;
  for (double a : {0.02, 0.05, 0.08}) {
    b = traversal::cs_bound_check(index, heights, g, Vec2(0.0, a), W, 32);
    CHECK(b.lhs == doctest::Approx(a * (W.x1 - W.x0)).epsilon(1e-9));
    CHECK(b.lhs <= b.rhs);
  }

  // Random heights and values.
  oracle::Rng rng(3);
  std::vector<double> h(m.vertices.size());
  for (int trial = 0; trial < 5; ++trial) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Point3& p = m.vertices[i];
      h[i] = 0.1 * p.x() * p.x() - 0.05 * p.y() * p.y();
    }
    for (auto& x : g) x = rng.uniform(-1, 1);
    b = traversal::cs_bound_check(index, h, g, rng.vec2(-0.1, 0.1), W, 32);
    CHECK(b.lhs <= b.rhs);
  }

  // Cocircular pairs have no dual length.
  const FlatMeshIndex squares(square_grid(6));
  const std::vector<double> flat(squares.mesh().vertices.size(), 0.0);
  const std::vector<double> gs(squares.mesh().triangles.size(), 1.0);
  CHECK_THROWS_WITH_AS(traversal::cs_bound_check(squares, flat, gs, Vec2(0.5, 0.2), Rect{1, 3, 1, 3}, 8),
                       doctest::Contains("ZeroDual"), Error);
}
