#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dw/energy.hpp"
#include "dw/generators.hpp"
#include "dw/harness.hpp"
#include "dw/lemmas.hpp"
#include "dw/mesh_io.hpp"
#include "oracles.hpp"

using namespace dw;

TEST_CASE("OFF reading") {
  std::istringstream in(
      "OFF\n# regular tetrahedron\n4 4 6\n"
      "0.5 0 -0.35355339059327373\n-0.5 0 -0.35355339059327373\n0 0.5 0.35355339059327373\n0 -0.5 0.35355339059327373\n"
      "3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n");
  const auto m = io::read_off(in);
  CHECK(m.vertices.size() == 4);
  CHECK(m.triangles.size() == 4);
  CHECK(energy::bending_energy(mesh::orient_consistently(m)).total == doctest::Approx(48.0).epsilon(1e-12));

  std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  CHECK_THROWS_WITH_AS(io::read_off(quad), doctest::Contains("NonTriangleFace"), Error);
  std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n");
  CHECK_THROWS_WITH_AS(io::read_off(bad), doctest::Contains("line 4"), Error);
  std::istringstream range("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  CHECK_THROWS_AS(io::read_off(range), Error);
}

TEST_CASE("OFF round trip is exact") {
  oracle::Rng rng(1);
  auto m = generators::icosphere(2);
  for (auto& p : m.vertices) p += 1e-3 * rng.vec3();
  std::stringstream s;
  io::write_off(s, m);
  const auto back = io::read_off(s);
  CHECK(back.triangles == m.triangles);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK(back.vertices[i] == m.vertices[i]);
}

TEST_CASE("OBJ reading") {
  std::istringstream in("# two triangles\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\nf -4 -2 -1\n");
  const auto m = io::read_obj(in);
  REQUIRE(m.triangles.size() == 2);
  CHECK(m.triangles[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.triangles[1] == std::array<int, 3>{0, 2, 3});
  std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  CHECK_THROWS_WITH_AS(io::read_obj(quad), doctest::Contains("NonTriangleFace"), Error);
}

TEST_CASE("experiment configs") {
  std::istringstream in(
      "experiment = converge  # sweep\n"
      "generator = theta_grid\n"
      "surface = graph:h=quadratic,a=0.05,b=0,c=-0.05,U=[0,1]x[0,1]\n"
      "levels = 1/8, 1/16, 0.03125\n"
      "theta = 0.1\n"
      "seed = 7\n");
  const auto spec = parse_experiment(in);
  CHECK(spec.kind == ExperimentKind::Converge);
  CHECK(spec.generator == "theta_grid");
  REQUIRE(spec.levels.size() == 3);
  CHECK(spec.levels[1] == 1.0 / 16);
  CHECK(spec.levels[2] == 1.0 / 32);
  CHECK(spec.seed == 7);

  std::istringstream unknown("experiment = converge\nfoo = 1\n");
  CHECK_THROWS_WITH_AS(parse_experiment(unknown), doctest::Contains("line 2"), Error);
  std::istringstream noeq("experiment converge\n");
  CHECK_THROWS_WITH_AS(parse_experiment(noeq), doctest::Contains("ParseError"), Error);
  std::istringstream unordered("generator = theta_grid\nlevels = 1/16, 1/8\n");
  CHECK_THROWS_WITH_AS(parse_experiment(unordered), doctest::Contains("decreasing"), Error);
  std::istringstream ico("generator = icosphere\nlevels = 3, 2\n");
  CHECK_THROWS_AS(parse_experiment(ico), Error);
}

TEST_CASE("convergence rows") {
  ExperimentSpec spec;
  spec.generator = "icosphere";
  spec.levels = {1, 2, 3};
  const auto rows = harness::run_convergence(spec);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto m = generators::icosphere(static_cast<int>(i) + 1);
    CHECK(rows[i].status == "ok");
    CHECK(rows[i].level == static_cast<int>(i));
    CHECK(rows[i].triangles == m.triangles.size());
    CHECK(rows[i].e == energy::bending_energy(m).total);
    CHECK(rows[i].reference == doctest::Approx(8 * std::numbers::pi));
    CHECK(rows[i].delaunay_ok);
    CHECK(rows[i].e_b.has_value());
  }
  const std::string csv = harness::convergence_csv(rows);
  CHECK(csv.rfind(std::string(kConvergenceHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  // A failing level keeps its row and the sweep continues.
  ExperimentSpec bad;
  bad.generator = "theta_grid";
  bad.surface = "graph:h=quadratic,a=0.05,b=0,c=-0.05,U=[0,0.1]x[0,0.1]";
  bad.levels = {0.5, 0.05};
  const auto brows = harness::run_convergence(bad);
  REQUIRE(brows.size() == 2);
  CHECK(brows[0].status.rfind("failed: EmptyDomain", 0) == 0);
  CHECK(brows[1].status == "ok");
}

TEST_CASE("certify verdicts") {
  harness::CertifyOptions opt;
  opt.zeta = 0.5;
  auto r = harness::certify(generators::icosphere(2), opt);
  CHECK(r.exit_code == 0);
  CHECK(r.manifold.pass);

  opt.zeta = 2.0;  // no mesh is regular for zeta above pi / 3
  CHECK(harness::certify(generators::icosphere(2), opt).exit_code == 1);

  opt.zeta = 0.0;
  IndexedMesh kite;
  kite.vertices = {{-1, 0, 0}, {1, 0, 0}, {0, 0.2, 0}, {0, -0.2, 0}};
  kite.triangles = {{0, 1, 2}, {1, 0, 3}};
  r = harness::certify(kite, opt);
  CHECK(r.exit_code == 1);
  CHECK_FALSE(r.quality.delaunay());

  opt.surface = AnalyticSurface::sphere(1.0);
  opt.protect = 1e-3;
  r = harness::certify(generators::icosphere(1), opt);
  REQUIRE(r.protection.has_value());
  CHECK(r.protection_ok == (r.protection->protection_margin >= 1e-3));
  const std::string kv = harness::to_key_value(r);
  CHECK(kv.find("protection_margin=") != std::string::npos);
  CHECK(kv.find("exit_code=") != std::string::npos);
}

TEST_CASE("lemma checks are deterministic and catch a scaled bound") {
  LemmaOptions opt;
  opt.trials = 20;
  const auto a = lemmas::verify_lemmas(3, opt);
  const auto b = lemmas::verify_lemmas(3, opt);
  REQUIRE(a.suites.size() == 4);
  CHECK(a.pass());
  for (std::size_t i = 0; i < a.suites.size(); ++i) {
    CHECK(a.suites[i].worst == b.suites[i].worst);
    CHECK(a.suites[i].passed == b.suites[i].passed);
  }
  opt.rhs_scale = 0.5;
  const auto broken = lemmas::verify_lemmas(3, opt);
  CHECK_FALSE(broken.pass());
  for (const auto& s : broken.suites)
    if (s.name != "cauchy_schwarz") CHECK(s.passed < s.trials);
}

TEST_CASE("worker threads follow DW_THREADS") {
  ::setenv("DW_THREADS", "3", 1);
  CHECK(harness::worker_threads() == 3);
  ::unsetenv("DW_THREADS");
  CHECK(harness::worker_threads() >= 1);
}
